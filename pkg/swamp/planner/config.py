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

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional


from swamp.automaton.automaton import Trace
from swamp.core.algebra.matrix import WVector
from swamp.core.algebra.semiring import SemiringTag, Weight, get_semiring
from swamp.dynamics import BoundsMode, ControlSequence


class Solver(str, Enum):
    gd = "gd"
    adam = "adam"


class LrSchedule(str, Enum):
    constant = "constant"
    halving = "halving"


class Engine(str, Enum):
    # Whole-trace numpy evaluation, or the scalar tape.
    vector = "vector"
    tape = "tape"


@dataclass(frozen=True)
class PlannerConfig(object):
    """Hyperparameters of one planning problem.

    Args:
        horizon: H, the number of controls planned.
        learning_rate: gamma, the gradient step size.
        epochs: k, the iteration budget of one open-loop solve.
        semiring: Weight semantics of the automaton.
        seed: Seeds the random restarts.
        control_bounds_mode: How control bounds are enforced after a step;
            None keeps the mode of the dynamics model.
        early_stop: Stop at the first epoch whose weight is the semiring one.
        restart_count: Extra solves from seeded random controls.
        solver: Plain gradient steps or adam.
        lr_schedule: Keep gamma, or halve it whenever the objective regresses.
        control_penalty: Weight of the squared control norm in the objective.
        warm_start: Seed each MPC solve with the previous plan shifted by one.
        mpc_consumes_current_state: Whether the MPC open-loop product starts
            from the memoized vector before (True) or after (False) the
            current state was read.
        prune_dead: Skip weight-vector rows that cannot reach acceptance.
        engine: How the weight and its gradient are computed each epoch.
    """

    horizon: int
    learning_rate: float = 0.05
    epochs: int = 100
    semiring: SemiringTag = SemiringTag.maxplus
    seed: int = 0
    control_bounds_mode: Optional[BoundsMode] = None
    early_stop: bool = True
    restart_count: int = 0
    solver: Solver = Solver.gd
    lr_schedule: LrSchedule = LrSchedule.constant
    control_penalty: float = 0.0
    warm_start: bool = True
    mpc_consumes_current_state: bool = True
    prune_dead: bool = True
    engine: Engine = Engine.vector

    def __post_init__(self):
        object.__setattr__(self, "semiring", SemiringTag(self.semiring))
        if self.control_bounds_mode is not None:
            object.__setattr__(self, "control_bounds_mode", BoundsMode(self.control_bounds_mode))
        object.__setattr__(self, "solver", Solver(self.solver))
        object.__setattr__(self, "lr_schedule", LrSchedule(self.lr_schedule))
        object.__setattr__(self, "engine", Engine(self.engine))
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1, got %s." % self.horizon)
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive, got %s." % self.learning_rate)
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1, got %s." % self.epochs)
        if self.restart_count < 0:
            raise ValueError("restart_count must be nonnegative.")
        if self.control_penalty < 0:
            raise ValueError("control_penalty must be nonnegative.")

    def replace(self, **changes) -> "PlannerConfig":
        return dataclasses.replace(self, **changes)

    def to_meta(self) -> dict:
        meta = dataclasses.asdict(self)
        for key, value in meta.items():
            if isinstance(value, Enum):
                meta[key] = value.value
        return meta


@dataclass
class PlanResult(object):
    controls: ControlSequence
    trace: Trace
    final_weight: Weight
    semiring: SemiringTag
    t_star: Optional[int] = None
    weight_history: List[float] = field(default_factory=list)
    rho: Optional[float] = None
    epochs: int = 0
    restart: int = 0
    # Set when the weight and every fallback objective were the semiring zero.
    dead: bool = False
    fallback_epochs: int = 0

    @property
    def accepted(self) -> bool:
        """The returned trace has weight one, i.e. the automaton accepts it."""
        return get_semiring(self.semiring).is_one(self.final_weight)

    def final_weight_value(self) -> float:
        return get_semiring(self.semiring).to_float(self.final_weight)


@dataclass
class MpcResult(object):
    trace: Trace
    controls: ControlSequence
    semiring: SemiringTag
    # q_0 .. q_T, the memoized weight vectors before each executed state is read.
    weight_vectors: List[WVector] = field(default_factory=list)
    # Weight of the executed prefix x_0 .. x_t, for every t.
    prefix_weights: List[float] = field(default_factory=list)
    final_weight: Weight = None
    step_results: List[PlanResult] = field(default_factory=list)
    rho: Optional[float] = None
    dead: bool = False
    dead_step: Optional[int] = None

    @property
    def accepted(self) -> bool:
        return get_semiring(self.semiring).is_one(self.final_weight)

    @property
    def steps(self) -> int:
        return len(self.trace) - 1

