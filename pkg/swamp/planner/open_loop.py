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


"""Open-loop planning: gradient ascent on the automaton weight of a rollout."""

import dataclasses
import logging
import time
from typing import FrozenSet, List, NamedTuple, Optional

import numpy as np

from swamp.automaton.automaton import (
    SymbolicAutomaton,
    Trace,
    alpha_beta,
    live_locations,
    step_weight_vector,
)
from swamp.automaton.compiled import ascent_vector, compile_automaton, from_ascent
from swamp.core import application_manager
from swamp.core.algebra import tape as ad
from swamp.core.algebra.matrix import WVector, vec_dot
from swamp.core.algebra.semiring import Absorbing, Semiring, SemiringTag, Weight, get_semiring
from swamp.core.errors import ShapeError
from swamp.dynamics import ControlSequence, DynamicsModel, rollout, simulate, simulate_vjp
from swamp.planner.config import Engine, PlannerConfig, PlanResult
from swamp.planner.optim import make_optimizer
from swamp import stl


class Evaluation(NamedTuple):
    weight: Weight
    # The ascent objective, None when nothing differentiable remains.
    objective: Optional[float]
    grad: np.ndarray
    trace: Trace
    fallback: bool


def ascent_sign(sr: Semiring) -> float:
    # (min, +) weights are costs: one is the smallest.
    return -1.0 if sr.tag is SemiringTag.minplus else 1.0


def detach(w: Weight) -> Weight:
    if isinstance(w, Absorbing):
        return w
    return float(ad.value_of(w))


def evaluate(
    model: DynamicsModel,
    A: SymbolicAutomaton,
    x_init,
    q_init: WVector,
    us: np.ndarray,
    s,
    control_penalty: float = 0.0,
    live: Optional[FrozenSet[int]] = None,
) -> Evaluation:
    """Weigh the rollout of us and differentiate the objective w.r.t. us.

    The rollout and every guard are evaluated on numpy arrays for the whole
    horizon at once, and the gradient is pulled back along the argmax run.
    Values and subgradients agree with evaluate_on_tape.

    When the weight is the semiring zero (no accepting run survives), the
    objective falls back to the sum over live locations of the final weight
    vector, so the gradient still pushes towards progress.
    """
    sr = get_semiring(s)
    X = simulate(model, x_init, us)
    sweep = compile_automaton(A).sweep(X, ascent_vector(q_init, sr), sr, live)
    target = from_ascent(sweep.target, sr)
    grad = np.zeros_like(us, dtype=np.float64)
    objective = None
    if not isinstance(target, Absorbing):
        objective = ascent_sign(sr) * target
        if control_penalty > 0.0:
            objective -= control_penalty * float(np.sum(us * us))
            grad -= 2.0 * control_penalty * us
        if sweep.grad is not None:
            grad += simulate_vjp(model, X, sweep.grad)
    return Evaluation(
        from_ascent(sweep.weight, sr), objective, grad, Trace(X.tolist()), sweep.fallback
    )


def evaluate_on_tape(
    model: DynamicsModel,
    A: SymbolicAutomaton,
    x_init,
    q_init: WVector,
    us: np.ndarray,
    s,
    control_penalty: float = 0.0,
    live: Optional[FrozenSet[int]] = None,
) -> Evaluation:
    """evaluate, recorded on a fresh tape and differentiated by tape_grad."""
    sr = get_semiring(s)
    g = ad.TapeGraph()
    u_vars = [[g.input(v) for v in row] for row in us]
    trace = rollout(model, x_init, u_vars)
    _, beta = alpha_beta(A, sr)
    q = q_init
    for x in trace:
        q = step_weight_vector(q, x, A, sr, live)
    w = vec_dot(q, beta)

    target = w
    fallback = isinstance(w, Absorbing)
    if fallback:
        pool = range(len(q)) if live is None else sorted(live)
        target = sr.sum(q[i] for i in pool)

    grad = np.zeros_like(us, dtype=np.float64)
    objective = None
    if not isinstance(target, Absorbing):
        J = ascent_sign(sr) * target
        if control_penalty > 0.0:
            for row in u_vars:
                for u in row:
                    J = J - control_penalty * ad.square(u)
        objective = float(ad.value_of(J))
        if ad.is_var(J):
            g.set_output(J)
            grad = ad.tape_grad(g).reshape(us.shape)
    return Evaluation(detach(w), objective, grad, trace.values(), fallback)


def descend(
    model: DynamicsModel,
    A: SymbolicAutomaton,
    x_init,
    q_init: WVector,
    cfg: PlannerConfig,
    us0: np.ndarray,
    live: Optional[FrozenSet[int]] = None,
    restart: int = 0,
) -> PlanResult:
    """One run of the epoch loop from the controls us0.

    Every epoch evaluates the current controls and, except in the last
    epoch, takes one step. The returned controls are the ones last
    evaluated, so their weight is the last entry of the history.
    """
    logger = logging.getLogger(__name__)
    sr = get_semiring(cfg.semiring)
    weigh = _EVALUATORS[cfg.engine]
    opt = make_optimizer(cfg)
    us = model.project(np.array(us0, dtype=np.float64))
    history: List[float] = []
    t_star = None
    fallback_epochs = 0

    def result(ev: Evaluation, epochs: int, dead: bool = False) -> PlanResult:
        return PlanResult(
            controls=ControlSequence(us.copy()),
            trace=ev.trace,
            final_weight=ev.weight,
            semiring=sr.tag,
            t_star=t_star,
            weight_history=history,
            epochs=epochs,
            restart=restart,
            dead=dead,
            fallback_epochs=fallback_epochs,
        )

    for epoch in range(1, cfg.epochs + 1):
        ev = weigh(model, A, x_init, q_init, us, sr, cfg.control_penalty, live)
        history.append(sr.to_float(ev.weight))
        logger.debug(
            "restart %d epoch %d weight %s objective %s", restart, epoch, ev.weight, ev.objective
        )
        if sr.is_one(ev.weight):
            if t_star is None:
                t_star = epoch
            if cfg.early_stop:
                return result(ev, epoch)
        if ev.fallback:
            if fallback_epochs == 0:
                logger.warning(
                    "weight is %s at epoch %d; climbing the best live prefix weight instead",
                    ev.weight,
                    epoch,
                )
            fallback_epochs += 1
        if ev.objective is None:
            logger.warning(
                "dead tape at epoch %d: no live location holds a weight; "
                "try random restarts or a longer horizon",
                epoch,
            )
            return result(ev, epoch, dead=True)
        if epoch == cfg.epochs:
            break
        opt.observe(ev.objective)
        us = model.project(opt.step(us, ev.grad))
    return result(ev, cfg.epochs)


_EVALUATORS = {Engine.vector: evaluate, Engine.tape: evaluate_on_tape}


def _rank(sr: Semiring, r: PlanResult):
    t_star = r.t_star if r.t_star is not None else np.inf
    return (not r.accepted, t_star, -ascent_sign(sr) * sr.to_float(r.final_weight), r.restart)


def _restart(model, A, x_init, q_init, cfg, live, us0, restart):
    return descend(model, A, x_init, q_init, cfg, us0, live, restart)


def solve(
    model: DynamicsModel,
    A: SymbolicAutomaton,
    x_init,
    q_init: WVector,
    cfg: PlannerConfig,
    init: Optional[np.ndarray] = None,
    live: Optional[FrozenSet[int]] = None,
) -> PlanResult:
    """Best of the run from init (zeros by default) and cfg.restart_count
    runs from seeded uniform controls; restarts fan out on the backend."""
    shape = (cfg.horizon, model.control_dim)
    us0 = np.zeros(shape) if init is None else np.asarray(init, dtype=np.float64)
    if us0.shape != shape:
        raise ShapeError("Initial controls have shape %s, expected %s." % (us0.shape, shape))
    if cfg.restart_count == 0:
        return descend(model, A, x_init, q_init, cfg, us0, live, 0)

    starts = [us0]
    for r in range(1, cfg.restart_count + 1):
        rng = np.random.default_rng([cfg.seed, r])
        starts.append(rng.uniform(model.lower(), model.upper(), size=shape))
    backend = application_manager.instance()
    backend.register("swamp_restart", _restart)
    results = backend.map(
        "swamp_restart",
        [(us, r) for r, us in enumerate(starts)],
        shared=(model, A, x_init, q_init, cfg, live),
    )
    sr = get_semiring(cfg.semiring)
    best = min(results, key=lambda r: _rank(sr, r))
    logging.getLogger(__name__).debug(
        "%d restarts; kept restart %d (t*=%s)", len(results), best.restart, best.t_star
    )
    return best


def with_bounds_mode(model: DynamicsModel, cfg: PlannerConfig) -> DynamicsModel:
    """model, with the bounds mode of cfg when cfg sets one."""
    if cfg.control_bounds_mode is None or cfg.control_bounds_mode is model.bounds_mode:
        return model
    return dataclasses.replace(model, bounds_mode=cfg.control_bounds_mode)


def check_problem(model: DynamicsModel, A: SymbolicAutomaton, x_init, q_init: WVector):
    if A.state_dim != model.state_dim:
        raise ShapeError(
            "Automaton reads %d state dimensions; %s has %d."
            % (A.state_dim, model.kind.value, model.state_dim)
        )
    if len(x_init) != model.state_dim:
        raise ShapeError("x_init has %d entries, expected %d." % (len(x_init), model.state_dim))
    if len(q_init) != A.n_locations:
        raise ShapeError(
            "q_init has %d entries for %d locations." % (len(q_init), A.n_locations)
        )


def open_loop(
    model: DynamicsModel,
    A: SymbolicAutomaton,
    x_init,
    q_init: Optional[WVector],
    cfg: PlannerConfig,
    init: Optional[np.ndarray] = None,
    formula: Optional[stl.StlFormula] = None,
) -> PlanResult:
    """Plan H controls from x_init whose rollout maximizes the automaton weight.

    Args:
        model: Predictive dynamics; cfg.control_bounds_mode, when set,
            overrides its bounds mode.
        A: The task automaton.
        x_init: Start state.
        q_init: Weight vector of the history before x_init; alpha when None.
        cfg: Planner hyperparameters.
        init: Initial controls of shape (H, m); zeros when None.
        formula: When given, the robustness of the planned trace is reported.

    Returns:
        A PlanResult. Its t_star is the 1-based epoch of the first weight
        equal to the semiring one.
    """
    model = with_bounds_mode(model, cfg)
    sr = get_semiring(cfg.semiring)
    q_init = alpha_beta(A, sr)[0] if q_init is None else q_init
    x_init = [float(v) for v in x_init]
    check_problem(model, A, x_init, q_init)
    live = live_locations(A) if cfg.prune_dead else None
    start = time.time()
    result = solve(model, A, x_init, q_init, cfg, init, live)
    if formula is not None:
        result.rho = stl.robustness(formula, result.trace)
    logging.getLogger(__name__).info(
        "open loop (%s): epochs=%d t*=%s weight=%s rho=%s in %.2fs",
        sr.tag.value,
        result.epochs,
        result.t_star,
        result.final_weight,
        result.rho,
        time.time() - start,
    )
    return result
