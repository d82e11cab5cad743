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


"""Whole-trace automaton weights on numpy arrays.

compile_automaton lowers every guard of a SymbolicAutomaton to a small
program over a table of distinct atoms, so a trace of T states costs one
batched evaluation per atom and per distinct guard. Weights are kept in
the ascent orientation: larger is better and -inf is the semiring zero.
Under (min, +) an entry is the negated cost; under the Boolean semiring
true is 0.
"""

import logging
from typing import Dict, List, NamedTuple, Optional, Set, Tuple

import numpy as np

from swamp.automaton.automaton import SymbolicAutomaton
from swamp.core.algebra import tape as ad
from swamp.core.algebra.matrix import WVector
from swamp.core.algebra.semiring import Absorbing, Semiring, SemiringTag, Weight
from swamp.core.errors import ShapeError
from swamp.spec import predicate as pr


_ADDITIVE = (SemiringTag.maxplus, SemiringTag.minplus)


def to_ascent(w: Weight, sr: Semiring) -> float:
    if isinstance(w, Absorbing):
        return -np.inf
    value = float(ad.value_of(w))
    if sr.tag is SemiringTag.boolean:
        return 0.0 if value == sr.one else -np.inf
    if sr.tag is SemiringTag.minplus:
        return 0.0 - value
    return value


def from_ascent(v: float, sr: Semiring) -> Weight:
    if sr.tag is SemiringTag.boolean:
        return sr.one if v == 0.0 else sr.zero
    if v == -np.inf:
        return sr.zero
    if sr.tag is SemiringTag.minplus:
        return 0.0 - float(v)
    return float(v)


def ascent_vector(q: WVector, sr: Semiring) -> np.ndarray:
    return np.array([to_ascent(w, sr) for w in q.entries], dtype=np.float64)


class Sweep(NamedTuple):
    # Ascent value of the trace weight.
    weight: float
    # What the planner climbs: the weight, or the best live entry of the
    # final weight vector when the weight is -inf.
    target: float
    fallback: bool
    # d target / d X of shape (T, n); None when target is -inf or constant.
    grad: Optional[np.ndarray]


class CompiledAutomaton(object):
    def __init__(self, A: SymbolicAutomaton):
        self.n_locations: int = A.n_locations
        self.state_dim: int = A.state_dim
        self.initial = np.array(sorted(A.initial), dtype=np.intp)
        self.accepting = np.array(sorted(A.accepting), dtype=np.intp)
        self.atoms: List[pr.MuFunction] = []
        self._atom_index: Dict[pr.MuFunction, int] = {}
        self.programs: List[tuple] = []
        guard_index: Dict[pr.Predicate, int] = {}
        src, dst, guard_of = [], [], []
        for (i, j), guard in sorted(A.guards.items()):
            if guard not in guard_index:
                guard_index[guard] = len(self.programs)
                self.programs.append(self._lower(guard))
            src.append(i)
            dst.append(j)
            guard_of.append(guard_index[guard])
        self.src = np.array(src, dtype=np.intp)
        self.dst = np.array(dst, dtype=np.intp)
        self.guard_of = np.array(guard_of, dtype=np.intp)
        self._edge_guard: Dict[Tuple[int, int], int] = {
            (i, j): g for i, j, g in zip(src, dst, guard_of)
        }
        logging.getLogger(__name__).debug(
            "compiled %r: %d distinct guards over %d atoms",
            A,
            len(self.programs),
            len(self.atoms),
        )

    def __repr__(self):
        return "CompiledAutomaton(locations=%d, guards=%d, atoms=%d)" % (
            self.n_locations,
            len(self.programs),
            len(self.atoms),
        )

    def _lower(self, p: pr.Predicate) -> tuple:
        if isinstance(p, pr.TrueP):
            return ("one",)
        if isinstance(p, pr.FalseP):
            return ("zero",)
        if isinstance(p, pr.Atom):
            if p.mu not in self._atom_index:
                self._atom_index[p.mu] = len(self.atoms)
                self.atoms.append(p.mu)
            return ("atom", self._atom_index[p.mu])
        if isinstance(p, pr.And):
            return ("and", self._lower(p.left), self._lower(p.right))
        if isinstance(p, pr.Or):
            return ("or", self._lower(p.left), self._lower(p.right))
        raise TypeError("Unexpected predicate %r" % (p,))

    def atom_table(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """mu of every atom along X: values (K, T) and state gradients (K, T, n)."""
        if X.ndim != 2 or X.shape[1] != self.state_dim:
            raise ShapeError(
                "Automaton reads states of dimension %d, got an array of shape %s."
                % (self.state_dim, X.shape)
            )
        T, n = X.shape
        values = np.empty((len(self.atoms), T))
        grads = np.empty((len(self.atoms), T, n))
        for k, mu in enumerate(self.atoms):
            mu.check_dim(X[0])
            values[k], grads[k] = mu.batch(X)
        return values, grads

    def _run(self, node, a, slope, additive) -> Tuple[np.ndarray, np.ndarray]:
        """Guard value (T,) and its d/d mu coefficients (T, K) at each state."""
        op = node[0]
        T, K = a.shape[1], a.shape[0]
        if op == "atom":
            coef = np.zeros((T, K))
            coef[:, node[1]] = slope[node[1]]
            return a[node[1]], coef
        if op == "one":
            return np.zeros(T), np.zeros((T, K))
        if op == "zero":
            return np.full(T, -np.inf), np.zeros((T, K))
        lv, lc = self._run(node[1], a, slope, additive)
        rv, rc = self._run(node[2], a, slope, additive)
        if op == "and" and additive:
            return lv + rv, lc + rc
        # Ties go to the left operand.
        left = lv >= rv if op == "or" else lv <= rv
        return np.where(left, lv, rv), np.where(left[:, None], lc, rc)

    def guard_table(self, mu: np.ndarray, sr: Semiring) -> Tuple[np.ndarray, np.ndarray]:
        """Ascent values (G, T) and d/d mu coefficients (G, T, K) of every distinct guard."""
        if sr.tag is SemiringTag.boolean:
            a = np.where(mu >= 0.0, 0.0, -np.inf)
            slope = np.zeros_like(mu)
        else:
            a = np.minimum(mu, 0.0)
            slope = (mu < 0.0).astype(np.float64)
        additive = sr.tag in _ADDITIVE
        G, T, K = len(self.programs), mu.shape[1], mu.shape[0]
        values = np.empty((G, T))
        coefs = np.empty((G, T, K))
        for g, program in enumerate(self.programs):
            values[g], coefs[g] = self._run(program, a, slope, additive)
        return values, coefs

    def operators(self, guard_values: np.ndarray) -> np.ndarray:
        """Ae(x_t) for every t as a dense (T, n, n) array; absent pairs are -inf."""
        T = guard_values.shape[1]
        W = np.full((T, self.n_locations, self.n_locations), -np.inf)
        W[:, self.src, self.dst] = guard_values[self.guard_of].T
        return W

    def sweep(
        self,
        X: np.ndarray,
        q0: np.ndarray,
        sr: Semiring,
        live: Optional[Set[int]] = None,
        grad: bool = True,
    ) -> Sweep:
        """q0^T Ae(x_0) ... Ae(x_{T-1}) beta and its gradient with respect to X.

        Rows outside live are skipped as in step_weight_vector. Row ties go
        to the lowest location, so the argmax path is the one the tape
        differentiates.
        """
        n = self.n_locations
        if q0.shape != (n,):
            raise ShapeError("Weight vector has %d entries for %d locations." % (q0.size, n))
        additive = sr.tag in _ADDITIVE
        mu, dmu = self.atom_table(X)
        guard_values, coefs = self.guard_table(mu, sr)
        W = self.operators(guard_values)
        T = X.shape[0]
        mask = None
        if live is not None:
            mask = np.zeros(n, dtype=bool)
            mask[sorted(live)] = True

        Q = np.empty((T + 1, n))
        Q[0] = q0
        P = np.empty((T, n), dtype=np.intp)
        cols = np.arange(n)
        for t in range(T):
            q = Q[t] if mask is None else np.where(mask, Q[t], -np.inf)
            Q[t] = q
            cand = q[:, None] + W[t] if additive else np.minimum(q[:, None], W[t])
            P[t] = np.argmax(cand, axis=0)
            Q[t + 1] = cand[P[t], cols]

        final = Q[T]
        best = int(self.accepting[np.argmax(final[self.accepting])])
        weight = float(final[best])
        fallback = weight == -np.inf and sr.tag is not SemiringTag.boolean
        if fallback:
            pool = np.arange(n) if mask is None else np.flatnonzero(mask)
            best = int(pool[np.argmax(final[pool])])
        target = float(final[best])
        if not grad or target == -np.inf or sr.tag is SemiringTag.boolean:
            return Sweep(weight, target, fallback, None)

        steps: List[int] = []
        guards: List[int] = []
        j = best
        for t in range(T - 1, -1, -1):
            i = int(P[t, j])
            if not additive and Q[t, i] <= W[t, i, j]:
                # The min is carried in from the previous step.
                j = i
                continue
            steps.append(t)
            guards.append(self._edge_guard[(i, j)])
            if not additive:
                break
            j = i
        gX = np.zeros_like(X, dtype=np.float64)
        if steps:
            ts, gs = np.array(steps), np.array(guards)
            gX[ts] = np.einsum("ek,ken->en", coefs[gs, ts], dmu[:, ts])
        return Sweep(weight, target, fallback, gX)


def compile_automaton(A: SymbolicAutomaton) -> CompiledAutomaton:
    """The CompiledAutomaton of A, built once and kept on A."""
    compiled = A.__dict__.get("_compiled")
    if compiled is None:
        compiled = CompiledAutomaton(A)
        A._compiled = compiled
    return compiled
