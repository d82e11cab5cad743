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


"""Receding-horizon control over a memoized automaton weight vector."""

import logging
import time
from typing import Optional

import numpy as np

from swamp.automaton.automaton import (
    SymbolicAutomaton,
    Trace,
    alpha_beta,
    live_locations,
    step_weight_vector,
)
from swamp.core import settings
from swamp.core.algebra.matrix import WVector, vec_dot
from swamp.core.algebra.semiring import get_semiring
from swamp.dynamics import ControlSequence, DynamicsModel, Environment
from swamp.planner.config import MpcResult, PlannerConfig
from swamp.planner.open_loop import check_problem, solve, with_bounds_mode
from swamp import stl


def mpc(
    model: DynamicsModel,
    environment: Environment,
    A: SymbolicAutomaton,
    x_init,
    cfg: PlannerConfig,
    total_steps: int,
    formula: Optional[stl.StlFormula] = None,
) -> MpcResult:
    """Run total_steps steps of plan, apply the first control, observe.

    q_t, the weight vector of the executed prefix x_0 .. x_{t-1}, is carried
    from step to step instead of re-reading the prefix. The loop stops early
    when no live location holds a weight any more: the executed prefix
    already violates the task.
    """
    logger = logging.getLogger(__name__)
    model = with_bounds_mode(model, cfg)
    sr = get_semiring(cfg.semiring)
    alpha, beta = alpha_beta(A, sr)
    x = np.asarray(x_init, dtype=np.float64)
    check_problem(model, A, x, alpha)
    if total_steps < 0:
        raise ValueError("total_steps must be nonnegative, got %d." % total_steps)
    live = live_locations(A)
    prune = live if cfg.prune_dead else None

    result = MpcResult(
        trace=None,
        controls=None,
        semiring=sr.tag,
        weight_vectors=[alpha],
    )
    states = [x]
    controls = []
    q: WVector = alpha
    previous = None
    start = time.time()
    for t in range(total_steps):
        if not any(not sr.is_zero(q[i]) for i in live):
            result.dead = True
            result.dead_step = t
            logger.warning(
                "step %d: the executed prefix reaches no accepting location; stopping", t
            )
            break
        if cfg.mpc_consumes_current_state:
            q_plan = q
        else:
            q_plan = step_weight_vector(q, x, A, sr)
        init = None
        if cfg.warm_start and previous is not None:
            init = previous.controls.shifted().controls
        plan = solve(model, A, x.tolist(), q_plan, cfg, init, prune)
        result.step_results.append(plan)
        u = plan.controls[0]

        q = step_weight_vector(q, x, A, sr)
        result.prefix_weights.append(sr.to_float(vec_dot(q, beta)))
        x = np.asarray(environment.next_state(t, x, u), dtype=np.float64)
        states.append(x)
        controls.append(u)
        result.weight_vectors.append(q)
        previous = plan
        if (t + 1) % settings.mpc_log_every == 0:
            logger.info(
                "mpc step %d/%d: plan weight %s, prefix weight %s, %.1fs",
                t + 1,
                total_steps,
                plan.final_weight,
                result.prefix_weights[-1],
                time.time() - start,
            )

    # The final state has not been read yet.
    final_q = step_weight_vector(q, x, A, sr)
    result.final_weight = vec_dot(final_q, beta)
    result.prefix_weights.append(sr.to_float(result.final_weight))
    result.trace = Trace(states)
    result.controls = ControlSequence(
        np.array(controls).reshape(-1, model.control_dim), model.control_dim
    )
    if formula is not None:
        result.rho = stl.robustness(formula, result.trace)
    logger.info(
        "mpc (%s): %d steps, weight=%s rho=%s dead=%s in %.2fs",
        sr.tag.value,
        result.steps,
        result.final_weight,
        result.rho,
        result.dead,
        time.time() - start,
    )
    return result
