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

import numpy as np

from swamp.planner.config import LrSchedule, PlannerConfig, Solver


# Ascent steps on an (H, m) control array. Objectives are always maximized;
# the caller flips the sign for semirings whose one is the smallest weight.


class GradientAscent:
    def __init__(self, lr: float, schedule: LrSchedule = LrSchedule.constant):
        self.lr = lr
        self.schedule = schedule
        self._last_objective = None

    def observe(self, objective: float):
        """Halve the step after an objective regression, when scheduled."""
        if (
            self.schedule is LrSchedule.halving
            and self._last_objective is not None
            and objective < self._last_objective
        ):
            self.lr *= 0.5
        self._last_objective = objective

    def direction(self, grad: np.ndarray) -> np.ndarray:
        return grad

    def step(self, us: np.ndarray, grad: np.ndarray) -> np.ndarray:
        return us + self.lr * self.direction(grad)


class Adam(GradientAscent):
    # Kingma and Ba's defaults.
    def __init__(
        self,
        lr: float,
        schedule: LrSchedule = LrSchedule.constant,
        beta1=0.9,
        beta2=0.999,
        eps=1e-8,
    ):
        super().__init__(lr, schedule)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.k = 0
        self.m = None
        self.v = None

    def direction(self, grad):
        if self.m is None:
            self.m = np.zeros_like(grad)
            self.v = np.zeros_like(grad)
        self.k += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad * grad
        m_hat = self.m / (1 - self.beta1 ** self.k)
        v_hat = self.v / (1 - self.beta2 ** self.k)
        return m_hat / (np.sqrt(v_hat) + self.eps)


def make_optimizer(cfg: PlannerConfig) -> GradientAscent:
    if cfg.solver is Solver.gd:
        return GradientAscent(cfg.learning_rate, cfg.lr_schedule)
    elif cfg.solver is Solver.adam:
        return Adam(cfg.learning_rate, cfg.lr_schedule)
    raise Exception("Unsupported optimizer specified %s." % cfg.solver)
