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
import pytest

from swamp.planner import LrSchedule, PlannerConfig, Solver
from swamp.planner.optim import Adam, GradientAscent, make_optimizer


def test_gradient_ascent_step():
    opt = GradientAscent(0.5)
    us = np.zeros((3, 2))
    grad = np.arange(6, dtype=np.float64).reshape(3, 2)
    np.testing.assert_array_equal(opt.step(us, grad), 0.5 * grad)


def test_halving_on_regression():
    opt = GradientAscent(1.0, LrSchedule.halving)
    for objective in [-3.0, -2.0, -2.0]:
        opt.observe(objective)
    assert opt.lr == 1.0
    opt.observe(-2.5)
    assert opt.lr == 0.5
    opt.observe(-4.0)
    assert opt.lr == 0.25


def test_constant_schedule_ignores_regression():
    opt = GradientAscent(1.0)
    opt.observe(0.0)
    opt.observe(-1.0)
    assert opt.lr == 1.0


def test_adam_first_step_is_sign():
    opt = Adam(0.1)
    grad = np.array([[2.0, -0.5], [1e-3, 0.0]])
    step = opt.step(np.zeros((2, 2)), grad)
    np.testing.assert_allclose(step, 0.1 * np.sign(grad), atol=1e-5)


def test_adam_climbs_quadratic():
    opt = Adam(0.05)
    u = np.array([[2.0]])
    for _ in range(500):
        u = opt.step(u, -2.0 * (u - 0.5))
    assert u[0, 0] == pytest.approx(0.5, abs=0.1)


def test_make_optimizer():
    cfg = PlannerConfig(horizon=2, learning_rate=0.3)
    gd = make_optimizer(cfg)
    assert type(gd) is GradientAscent
    assert gd.lr == 0.3
    adam = make_optimizer(cfg.replace(solver=Solver.adam, lr_schedule="halving"))
    assert isinstance(adam, Adam)
    assert adam.schedule is LrSchedule.halving
