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

import psutil


def default_workers(reserved: int = 2) -> int:
    """Physical cores less reserved, and never fewer than one."""
    if reserved < 0:
        raise ValueError("Cannot reserve %d cores." % reserved)
    physical = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    if physical <= reserved:
        logging.getLogger(__name__).debug(
            "%d physical cores, %d reserved; using one worker", physical, reserved
        )
        return 1
    return physical - reserved
