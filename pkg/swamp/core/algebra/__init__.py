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
from swamp.core.algebra.semiring import (
    BOTTOM,
    TOP,
    Absorbing,
    Semiring,
    SemiringTag,
    Weight,
    get_semiring,
    sr_add,
    sr_mul,
)
from swamp.core.algebra.matrix import WMatrix, WVector, mat_mul, vec_dot, vec_mat
from swamp.core.algebra.tape import TapeGraph, Var, tape_eval, tape_grad, value_of
