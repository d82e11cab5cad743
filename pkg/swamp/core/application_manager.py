# Copyright (C) 2026 swamp Development Team.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import logging
import sys

from swamp.core import settings
from swamp.core.backends import Backend, RayBackend, SerialBackend

# pylint: disable=global-statement


_instance: Backend = None
_logging_configured = False


def is_initialized():
    return _instance is not None


def instance() -> Backend:
    # Lazy-initialize to initialize on use instead of initializing on import.
    global _instance
    if _instance is None:
        _instance = create()
    return _instance


def create() -> Backend:
    configure_logging()

    global _instance

    if _instance is not None:
        raise Exception("create() called more than once.")

    backend_name = settings.backend_name
    if backend_name == "serial":
        backend: Backend = SerialBackend(settings.num_cpus)
    elif backend_name == "ray":
        backend: Backend = RayBackend(
            address=settings.address, num_cpus=settings.num_cpus
        )
    else:
        raise Exception("Unexpected backend name %s" % settings.backend_name)
    backend.init()
    logging.getLogger(__name__).debug("initialized %s backend", backend_name)
    return backend


def destroy():
    global _instance
    if _instance is None:
        return
    # This will shutdown ray if ray was started by swamp.
    _instance.shutdown()
    _instance = None


def configure_logging(level: str = None):
    global _logging_configured
    level = settings.log_level if level is None else level.upper()
    root = logging.getLogger("swamp")
    root.setLevel(getattr(logging, level, logging.INFO))
    if _logging_configured:
        return
    handler = logging.StreamHandler(sys.stdout)
    handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
    root.addHandler(handler)
    _logging_configured = True
