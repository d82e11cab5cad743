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
from typing import Any, Callable, Dict, List, Optional, Sequence

import ray

from .base import Backend
from .utils import default_workers

# Failed planner runs surface instead of being retried.
_REMOTE_DEFAULTS = {"max_retries": 0}


class RayBackend(Backend):
    """Runs jobs as Ray tasks.

    Connects to address when one is given. Otherwise starts a local Ray
    instance with num_cpus CPUs, and stops it again on shutdown. A Ray
    instance that was already running is left alone.
    """

    def __init__(self, address: Optional[str] = None, num_cpus: Optional[int] = None):
        self._address = address
        self.num_cpus = default_workers() if num_cpus is None else int(num_cpus)
        self._owns_ray = False
        self._jobs: Dict[str, Any] = {}

    def init(self):
        if not ray.is_initialized():
            if self._address is None:
                ray.init(num_cpus=self.num_cpus)
            else:
                ray.init(address=self._address)
            self._owns_ray = True
        logging.getLogger(__name__).info("ray backend with %d cpus", self.workers())

    def shutdown(self):
        self._jobs.clear()
        if self._owns_ray:
            ray.shutdown()
            self._owns_ray = False

    def register(self, name: str, func: Callable, remote_params: Optional[Dict] = None):
        if name in self._jobs:
            return
        params = dict(_REMOTE_DEFAULTS, **(remote_params or {}))
        self._jobs[name] = ray.remote(**params)(func)

    def share(self, value: Any) -> Any:
        return ray.put(value)

    def submit(self, name: str, args: tuple) -> Any:
        return self._jobs[name].remote(*args)

    def gather(self, handles: Sequence[Any]) -> List[Any]:
        return ray.get(list(handles))

    def workers(self) -> int:
        return int(ray.cluster_resources().get("CPU", self.num_cpus))
