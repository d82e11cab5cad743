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


class Backend:
    """Runs planner jobs in-process or on a Ray cluster.

    A job is one independent optimization run, a random restart or one
    scenario of a sweep. Every job owns its tape, so registered functions
    share no mutable state.
    """

    def init(self):
        raise NotImplementedError()

    def shutdown(self):
        raise NotImplementedError()

    def register(self, name: str, func: Callable, remote_params: Optional[Dict] = None):
        """Register func under name. A second registration of name is ignored."""
        raise NotImplementedError()

    def submit(self, name: str, args: tuple) -> Any:
        """Start one job. Returns a handle to pass to gather."""
        raise NotImplementedError()

    def gather(self, handles: Sequence[Any]) -> List[Any]:
        raise NotImplementedError()

    def share(self, value: Any) -> Any:
        """Return what to pass to jobs in place of value."""
        return value

    def workers(self) -> int:
        raise NotImplementedError()

    def map(self, name: str, arg_list: Sequence[tuple], shared: tuple = ()) -> List[Any]:
        """Run name(*shared, *args) for every args in arg_list.

        shared holds arguments common to all jobs (the model, the automaton)
        and is handed to the backend once. Results follow arg_list order.
        """
        shared = tuple(self.share(v) for v in shared)
        handles = [self.submit(name, shared + tuple(args)) for args in arg_list]
        logging.getLogger(__name__).debug(
            "%s: %d jobs on %d workers", name, len(handles), self.workers()
        )
        return self.gather(handles)
