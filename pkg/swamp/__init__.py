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

from swamp.api import init, run, sweep
from swamp.automaton import (
    SymbolicAutomaton,
    Trace,
    accepts,
    build_any_order_visit,
    build_bounded_response,
    build_sequence_visit,
    trajectory_weight,
)
from swamp.core.algebra import SemiringTag
from swamp.core.version import __version__
from swamp.dynamics import DynamicsModel
from swamp.planner import PlannerConfig, mpc, open_loop
from swamp.scenario import load_scenario

__all__ = [
    "init",
    "run",
    "sweep",
    "load_scenario",
    "SymbolicAutomaton",
    "Trace",
    "accepts",
    "trajectory_weight",
    "build_sequence_visit",
    "build_any_order_visit",
    "build_bounded_response",
    "SemiringTag",
    "DynamicsModel",
    "PlannerConfig",
    "open_loop",
    "mpc",
]
