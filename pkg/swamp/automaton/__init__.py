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

from swamp.automaton.automaton import (
    Run,
    SymbolicAutomaton,
    Trace,
    accepts,
    alpha_beta,
    automaton_robustness,
    complement,
    enumerate_runs,
    from_dict,
    from_json,
    live_locations,
    operator_matrix,
    prefix_weights,
    product,
    reachable_locations,
    robustness_profile,
    spot_check,
    step_weight_vector,
    to_dict,
    to_json,
    trajectory_weight,
)
from swamp.automaton.builders import (
    build_any_order_visit,
    build_bounded_response,
    build_sequence_visit,
)

from swamp.automaton.compiled import CompiledAutomaton, compile_automaton
