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
from swamp.automaton.compiled import (
    ascent_vector,
    compile_automaton,
    from_ascent,
    to_ascent,
)
from swamp.core.algebra import BOTTOM, TOP, get_semiring
from swamp.core.algebra import tape as ad
from swamp.core.errors import ShapeError
from swamp.planner.open_loop import ascent_sign
from swamp.spec import predicate as pr


SEMIRINGS = ["boolean", "minmax", "maxplus", "minplus"]


def _same_weight(sr, a, b):
    if sr.is_zero(a) or sr.is_zero(b):
        return sr.is_zero(a) and sr.is_zero(b)
    return np.isclose(sr.to_float(a), sr.to_float(b), rtol=1e-12, atol=1e-12)


def test_ascent_orientation():
    assert to_ascent(BOTTOM, get_semiring("maxplus")) == -np.inf
    assert to_ascent(TOP, get_semiring("minplus")) == -np.inf
    assert to_ascent(2.5, get_semiring("minplus")) == -2.5
    assert to_ascent(1.0, get_semiring("boolean")) == 0.0
    assert to_ascent(0.0, get_semiring("boolean")) == -np.inf
    assert from_ascent(-np.inf, get_semiring("minmax")) is BOTTOM
    assert from_ascent(-np.inf, get_semiring("minplus")) is TOP
    assert from_ascent(-2.5, get_semiring("minplus")) == 2.5
    assert from_ascent(0.0, get_semiring("minplus")) == 0.0
    assert from_ascent(-np.inf, get_semiring("boolean")) == 0.0


@pytest.mark.parametrize("s", SEMIRINGS)
def test_sweep_weight_matches_trajectory_weight(automaton_factory, trace_factory, s):
    sr = get_semiring(s)
    rng = np.random.default_rng(3)
    for seed in range(300):
        A = automaton_factory(seed, n=int(rng.integers(1, 6)))
        xi = trace_factory(seed, int(rng.integers(1, 8)))
        alpha = au.alpha_beta(A, sr)[0]
        for live in (None, au.live_locations(A)):
            sweep = compile_automaton(A).sweep(np.array(xi), ascent_vector(alpha, sr), sr, live)
            expected = au.trajectory_weight(A, xi, sr, live=live)
            assert _same_weight(sr, from_ascent(sweep.weight, sr), expected)


def _tape_gradient(A, xs, sr, live):
    """d(sign * weight)/dX by tape_grad, or None when the weight has no gradient."""
    g = ad.TapeGraph()
    w = au.trajectory_weight(A, [g.inputs_from(x) for x in xs], sr, live=live)
    if not ad.is_var(w) or ad.kink_margin(g) <= 1e-6:
        return None
    g.set_output(ascent_sign(sr) * w)
    return ad.tape_grad(g).reshape(xs.shape)


@pytest.mark.parametrize("s", ["minmax", "maxplus", "minplus"])
def test_sweep_gradient_matches_tape(automaton_factory, s):
    sr = get_semiring(s)
    checked = 0
    for seed in range(2000):
        rng = np.random.default_rng(seed)
        A = automaton_factory(seed, n=int(rng.integers(1, 6)))
        xs = rng.uniform(-2.0, 2.0, size=(int(rng.integers(1, 7)), 2))
        live = au.live_locations(A) if seed % 2 else None
        expected = _tape_gradient(A, xs, sr, live)
        if expected is None:
            continue
        alpha = au.alpha_beta(A, sr)[0]
        sweep = compile_automaton(A).sweep(xs, ascent_vector(alpha, sr), sr, live)
        got = np.zeros_like(xs) if sweep.grad is None else sweep.grad
        assert np.allclose(got, expected, atol=1e-12)
        checked += 1
        if checked == 100:
            break
    assert checked == 100


def test_builder_atoms_are_shared(regions):
    A = builders.build_any_order_visit(
        [regions["red"], regions["green"], regions["star"]], [5, 5, 1], [regions["blue"]]
    )
    compiled = compile_automaton(A)
    assert compile_automaton(A) is compiled
    assert len(compiled.atoms) <= 8
    assert len(compiled.programs) < len(A.guards)


def test_fallback_and_dead_sweeps():
    sr = get_semiring("maxplus")
    # Acceptance needs three states.
    guards = {(0, 1): pr.TRUE, (1, 2): pr.TRUE, (2, 2): pr.TRUE}
    A = au.SymbolicAutomaton(3, [0], [2], guards, 1)
    q0 = ascent_vector(au.alpha_beta(A, sr)[0], sr)
    sweep = compile_automaton(A).sweep(np.zeros((1, 1)), q0, sr)
    assert sweep.weight == -np.inf
    assert sweep.fallback
    assert sweep.target == 0.0
    sweep = compile_automaton(A).sweep(np.zeros((3, 1)), q0, sr)
    assert sweep.weight == 0.0 and not sweep.fallback
    # Nothing leaves the initial location.
    B = au.SymbolicAutomaton(3, [0], [1], {(2, 2): pr.TRUE}, 1)
    q0 = ascent_vector(au.alpha_beta(B, sr)[0], sr)
    sweep = compile_automaton(B).sweep(np.zeros((2, 1)), q0, sr)
    assert sweep.target == -np.inf
    assert sweep.grad is None


def test_minmax_gradient_reaches_one_atom(atom):
    sr = get_semiring("minmax")
    # Stay where x >= 0 for two states; the second state is the worse one.
    A = au.SymbolicAutomaton(1, [0], [0], {(0, 0): atom((1.0,), 0.0)}, 1)
    q0 = ascent_vector(au.alpha_beta(A, sr)[0], sr)
    sweep = compile_automaton(A).sweep(np.array([[-0.5], [-2.0]]), q0, sr)
    assert sweep.weight == -2.0
    assert sweep.grad.tolist() == [[0.0], [1.0]]


def test_shape_errors(atom):
    A = au.SymbolicAutomaton(1, [0], [0], {(0, 0): atom((1.0, 0.0), 0.0)}, 2)
    sr = get_semiring("maxplus")
    q0 = ascent_vector(au.alpha_beta(A, sr)[0], sr)
    with pytest.raises(ShapeError):
        compile_automaton(A).sweep(np.zeros((3, 3)), q0, sr)
    with pytest.raises(ShapeError):
        compile_automaton(A).sweep(np.zeros((3, 2)), np.zeros(2), sr)
