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

from swamp.automaton import automaton as au
from swamp.automaton import builders
from swamp.core import settings
from swamp.core.algebra import BOTTOM, get_semiring
from swamp.core.errors import ControlBoundsError, ShapeError
from swamp.dynamics import DynamicsModel
from swamp.planner import PlannerConfig, evaluate, open_loop
from swamp.planner.open_loop import ascent_sign, descend, evaluate_on_tape
from swamp.scenario import load_scenario
from swamp.spec import predicate as pr


X0 = (-1.0, -1.0)


@pytest.fixture
def goal():
    return pr.Region("goal", "box", (0, 1), lo=(0.5, -1.2), hi=(1.0, -0.8))


@pytest.fixture
def reach(goal):
    return builders.build_sequence_visit([goal])


def _sweep_right(horizon, speed=0.5):
    # Controls moving right make the last state the unique best entry point.
    return np.tile([speed, 0.0], (horizon, 1))


@pytest.mark.parametrize("semiring", ["maxplus", "minmax", "minplus"])
def test_reaches_goal(reach, semiring):
    model = DynamicsModel("single_integrator")
    cfg = PlannerConfig(horizon=10, learning_rate=1.0, epochs=200, semiring=semiring)
    result = open_loop(model, reach, X0, None, cfg, init=_sweep_right(10))
    assert result.accepted
    assert result.t_star is not None and result.t_star <= 20
    assert result.epochs == result.t_star
    assert len(result.weight_history) == result.t_star
    assert get_semiring(semiring).is_one(result.final_weight)
    assert au.reachable_locations(reach, result.trace) & reach.accepting
    assert len(result.trace) == 11
    assert result.trace[0] == X0
    assert np.all(np.abs(result.controls.to_numpy()) <= 2.0)
    # The first weight is the distance of the last state to the goal.
    sign = ascent_sign(get_semiring(semiring))
    assert np.isclose(sign * result.weight_history[0], -1.0)


def test_trivial_automaton_is_satisfied_at_first_epoch():
    A = au.SymbolicAutomaton(1, [0], [0], {(0, 0): pr.TRUE}, 2)
    model = DynamicsModel("single_integrator")
    result = open_loop(model, A, X0, None, PlannerConfig(horizon=5, epochs=50))
    assert result.t_star == 1
    assert result.epochs == 1
    assert result.accepted
    assert result.controls.to_numpy().tolist() == [[0.0, 0.0]] * 5


def test_no_early_stop_runs_every_epoch(reach):
    model = DynamicsModel("single_integrator")
    cfg = PlannerConfig(horizon=10, learning_rate=1.0, epochs=40, early_stop=False)
    result = open_loop(model, reach, X0, None, cfg, init=_sweep_right(10))
    assert result.epochs == 40
    assert len(result.weight_history) == 40
    assert result.t_star is not None and result.t_star < 40
    assert result.accepted


def test_dead_tape():
    A = au.SymbolicAutomaton(2, [0], [1], {(1, 1): pr.TRUE}, 2)
    model = DynamicsModel("single_integrator")
    result = open_loop(model, A, X0, None, PlannerConfig(horizon=3, epochs=10))
    assert result.dead
    assert result.epochs == 1
    assert result.final_weight is BOTTOM
    assert not result.accepted


def test_fallback_objective():
    # Acceptance needs four states; a horizon of one yields two, so the weight
    # stays bottom and the objective falls back to the live weight vector.
    guards = {(0, 1): pr.TRUE, (1, 2): pr.TRUE, (2, 3): pr.TRUE, (3, 3): pr.TRUE}
    A = au.SymbolicAutomaton(4, [0], [3], guards, 2)
    model = DynamicsModel("single_integrator")
    result = open_loop(model, A, X0, None, PlannerConfig(horizon=1, epochs=5))
    assert result.final_weight is BOTTOM
    assert result.fallback_epochs == 5
    assert result.epochs == 5
    assert not result.dead
    assert not result.accepted


def test_gradient_matches_finite_differences(reach):
    model = DynamicsModel("single_integrator")
    sr = get_semiring("maxplus")
    alpha = au.alpha_beta(reach, sr)[0]
    rng = np.random.default_rng(0)
    h = settings.fd_step
    for _ in range(20):
        us = rng.uniform(-1.0, 1.0, size=(6, 2))
        ev = evaluate(model, reach, list(X0), alpha, us, sr, control_penalty=0.1)
        fd = np.zeros_like(us)
        for idx in np.ndindex(*us.shape):
            up, down = us.copy(), us.copy()
            up[idx] += h
            down[idx] -= h
            f_up = evaluate(model, reach, list(X0), alpha, up, sr, control_penalty=0.1).objective
            f_down = evaluate(model, reach, list(X0), alpha, down, sr, control_penalty=0.1).objective
            fd[idx] = (f_up - f_down) / (2 * h)
        assert np.allclose(ev.grad, fd, rtol=1e-4, atol=1e-6)


def test_deterministic(reach):
    model = DynamicsModel("single_integrator")
    cfg = PlannerConfig(horizon=10, learning_rate=0.5, epochs=30, early_stop=False)
    a = open_loop(model, reach, X0, None, cfg, init=_sweep_right(10, 0.1))
    b = open_loop(model, reach, X0, None, cfg, init=_sweep_right(10, 0.1))
    assert a.controls.to_numpy().tolist() == b.controls.to_numpy().tolist()
    assert a.weight_history == b.weight_history


def test_restarts(backend, reach):
    model = DynamicsModel("single_integrator")
    cfg = PlannerConfig(horizon=10, learning_rate=1.0, epochs=100, restart_count=3, seed=4)
    a = open_loop(model, reach, X0, None, cfg, init=_sweep_right(10))
    b = open_loop(model, reach, X0, None, cfg, init=_sweep_right(10))
    assert a.accepted
    assert 0 <= a.restart <= 3
    assert a.restart == b.restart
    assert a.controls.to_numpy().tolist() == b.controls.to_numpy().tolist()
    # Restarts never do worse than the plain run.
    plain = open_loop(model, reach, X0, None, cfg.replace(restart_count=0), init=_sweep_right(10))
    assert a.t_star <= plain.t_star


def test_adam_and_halving(reach):
    model = DynamicsModel("single_integrator")
    for changes in ({"solver": "adam", "learning_rate": 0.2}, {"lr_schedule": "halving"}):
        cfg = PlannerConfig(horizon=10, learning_rate=1.0, epochs=300).replace(**changes)
        result = open_loop(model, reach, X0, None, cfg, init=_sweep_right(10))
        assert result.accepted


def test_reject_mode_raises(reach):
    model = DynamicsModel("single_integrator")
    cfg = PlannerConfig(horizon=10, learning_rate=50.0, epochs=5, control_bounds_mode="reject")
    with pytest.raises(ControlBoundsError):
        open_loop(model, reach, X0, None, cfg, init=_sweep_right(10))


def test_stl_robustness_reported(reach, goal):
    from swamp.spec.parser import parse_formula

    model = DynamicsModel("single_integrator")
    cfg = PlannerConfig(horizon=10, learning_rate=1.0, epochs=200)
    f = parse_formula("F in(goal)", {"goal": goal})
    result = open_loop(model, reach, X0, None, cfg, init=_sweep_right(10), formula=f)
    assert result.rho is not None and result.rho >= 0.0


def test_problem_checks(reach):
    model = DynamicsModel("unicycle")
    with pytest.raises(ShapeError):
        open_loop(model, reach, (0.0,) * 5, None, PlannerConfig(horizon=2))
    model = DynamicsModel("single_integrator")
    with pytest.raises(ShapeError):
        open_loop(model, reach, (0.0,), None, PlannerConfig(horizon=2))
    with pytest.raises(ShapeError):
        open_loop(model, reach, X0, None, PlannerConfig(horizon=2), init=np.zeros((3, 2)))


def test_config_validation():
    with pytest.raises(ValueError):
        PlannerConfig(horizon=0)
    with pytest.raises(ValueError):
        PlannerConfig(horizon=1, learning_rate=0.0)
    with pytest.raises(ValueError):
        PlannerConfig(horizon=1, epochs=0)
    with pytest.raises(ValueError):
        PlannerConfig(horizon=1, semiring="tropical")
    meta = PlannerConfig(horizon=3, semiring="minmax").to_meta()
    assert meta["semiring"] == "minmax"
    assert PlannerConfig(**meta) == PlannerConfig(horizon=3, semiring="minmax")


def test_descend_reports_last_evaluation(reach):
    model = DynamicsModel("single_integrator")
    cfg = PlannerConfig(horizon=10, learning_rate=1.0, epochs=3)
    alpha = au.alpha_beta(reach, "maxplus")[0]
    result = descend(model, reach, list(X0), alpha, cfg, _sweep_right(10))
    # Three evaluations with two steps between them.
    assert result.epochs == 3
    assert len(result.weight_history) == 3
    assert np.allclose(result.controls.to_numpy()[:, 0], 0.5 + 2 * 0.1)
    assert np.isclose(result.trace[-1][0], -1.0 + 0.1 * 10 * 0.7)
    assert result.weight_history[-1] == result.final_weight_value()


def test_accepted_result_has_t_star(reach):
    model = DynamicsModel("single_integrator")
    alpha = au.alpha_beta(reach, "maxplus")[0]
    verdicts = set()
    for epochs in range(1, 16):
        cfg = PlannerConfig(horizon=10, learning_rate=1.0, epochs=epochs, early_stop=False)
        result = descend(model, reach, list(X0), alpha, cfg, _sweep_right(10))
        assert result.weight_history[-1] == result.final_weight_value()
        if result.accepted:
            assert result.t_star is not None and result.t_star <= epochs
        verdicts.add(result.accepted)
    assert verdicts == {True, False}


def _engine_problems(regions):
    yield (
        DynamicsModel("single_integrator"),
        builders.build_any_order_visit(
            [regions["red"], regions["green"], regions["star"]], [2, 2, 1], [regions["blue"]]
        ),
        [-1.0, -1.0],
        1.0,
    )
    yield (
        DynamicsModel("unicycle"),
        builders.build_sequence_visit([regions["red"], regions["star"]], [regions["blue"]], state_dim=5),
        [-1.0, -1.0, 0.3, 0.5, 0.0],
        2.0,
    )
    sc = load_scenario("acc.json")
    yield sc.model, sc.automaton, list(sc.x0), 3.0


@pytest.mark.parametrize("semiring", ["boolean", "minmax", "maxplus", "minplus"])
def test_engines_agree(regions, semiring):
    sr = get_semiring(semiring)
    rng = np.random.default_rng(4)
    for model, A, x0, scale in _engine_problems(regions):
        alpha = au.alpha_beta(A, sr)[0]
        for live in (None, au.live_locations(A)):
            for _ in range(5):
                us = rng.uniform(-scale, scale, size=(12, model.control_dim))
                a = evaluate(model, A, x0, alpha, us, sr, 0.01, live)
                b = evaluate_on_tape(model, A, x0, alpha, us, sr, 0.01, live)
                assert a.fallback == b.fallback
                assert sr.is_zero(a.weight) == sr.is_zero(b.weight)
                if not sr.is_zero(a.weight):
                    assert np.isclose(sr.to_float(a.weight), sr.to_float(b.weight), atol=1e-9)
                assert (a.objective is None) == (b.objective is None)
                if a.objective is not None:
                    assert np.isclose(a.objective, b.objective, atol=1e-9)
                assert np.allclose(a.grad, b.grad, rtol=1e-7, atol=1e-9)
                assert np.allclose(a.trace.to_numpy(), b.trace.to_numpy())


def test_tape_engine_plans_the_same(reach):
    model = DynamicsModel("single_integrator")
    cfg = PlannerConfig(horizon=10, learning_rate=1.0, epochs=30, early_stop=False)
    a = open_loop(model, reach, X0, None, cfg, init=_sweep_right(10, 0.13))
    b = open_loop(model, reach, X0, None, cfg.replace(engine="tape"), init=_sweep_right(10, 0.13))
    assert a.t_star == b.t_star
    assert np.allclose(a.weight_history, b.weight_history)
    assert np.allclose(a.controls.to_numpy(), b.controls.to_numpy())


def test_model_bounds_mode_is_kept_unless_config_sets_one(reach):
    cfg = PlannerConfig(horizon=10, learning_rate=100.0, epochs=2, early_stop=False)
    free = DynamicsModel("single_integrator", bounds_mode="none")
    result = open_loop(free, reach, X0, None, cfg, init=_sweep_right(10))
    assert np.abs(result.controls.to_numpy()).max() > 2.0
    clipped = cfg.replace(control_bounds_mode="project")
    result = open_loop(free, reach, X0, None, clipped, init=_sweep_right(10))
    assert np.abs(result.controls.to_numpy()).max() <= 2.0
    strict = DynamicsModel("single_integrator", bounds_mode="reject")
    with pytest.raises(ControlBoundsError):
        open_loop(strict, reach, X0, None, cfg, init=_sweep_right(10))
