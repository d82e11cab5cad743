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
from typing import Any, Callable, Dict, List, Optional, Sequence

from .base import Backend
from .utils import default_workers


class SerialBackend(Backend):
    """Runs each job as soon as it is submitted."""

    def __init__(self, num_cpus: Optional[int] = None):
        self.num_cpus = default_workers() if num_cpus is None else int(num_cpus)
        self._jobs: Dict[str, Callable] = {}

    def init(self):
        pass

    def shutdown(self):
        self._jobs.clear()

    def register(self, name: str, func: Callable, remote_params: Optional[Dict] = None):
        self._jobs.setdefault(name, func)

    def submit(self, name: str, args: tuple) -> Any:
        return self._jobs[name](*args)

    def gather(self, handles: Sequence[Any]) -> List[Any]:
        return list(handles)

    def workers(self) -> int:
        return self.num_cpus
