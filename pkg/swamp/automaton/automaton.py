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


"""Symbolic automata and their semiring weights.

A SymbolicAutomaton reads traces of real state vectors. Its transition
relation is a sparse map from location pairs (i, j) to guard predicates;
a missing pair is the guard false. Under a semiring, a state x turns the
automaton into the operator matrix Ae(x) whose (i, j) entry is the
generalized weight of guard (i, j) at x, and the weight of a trace is
alpha^T Ae(x_0) ... Ae(x_l) beta.
"""

import json
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, Tuple

import numpy as np

from swamp.core import settings
from swamp.core.algebra import tape as ad
from swamp.core.algebra.matrix import WMatrix, WVector, vec_dot
from swamp.core.algebra.semiring import Weight, get_semiring
from swamp.core.errors import (
    AutomatonPreconditionError,
    EnumerationCapError,
    ShapeError,
)
from swamp.spec import predicate as pr
from swamp.spec.parser import parse_predicate


class Trace(object):
    """A nonempty finite sequence of states of one dimension."""

    def __init__(self, states: Iterable):
        self.states: Tuple = tuple(tuple(x) for x in states)
        if len(self.states) == 0:
            raise ValueError("A trace holds at least one state.")
        n = len(self.states[0])
        for t, x in enumerate(self.states):
            if len(x) != n:
                raise ShapeError(
                    "State %d has dimension %d, expected %d." % (t, len(x), n)
                )

    @property
    def dim(self) -> int:
        return len(self.states[0])

    def __len__(self):
        return len(self.states)

    def __getitem__(self, t):
        return self.states[t]

    def __iter__(self):
        return iter(self.states)

    def __repr__(self):
        return "Trace(len=%d, dim=%d)" % (len(self), self.dim)

    def values(self) -> "Trace":
        """A copy with every tape Var replaced by its value."""
        return Trace([[float(ad.value_of(v)) for v in x] for x in self.states])

    def to_numpy(self) -> np.ndarray:
        return np.array([[ad.value_of(v) for v in x] for x in self.states], dtype=np.float64)


@dataclass(frozen=True)
class Run(object):
    locations: Tuple[int, ...]

    def __len__(self):
        return len(self.locations)

    @property
    def last(self) -> int:
        return self.locations[-1]


class SymbolicAutomaton(object):
    def __init__(
        self,
        n_locations: int,
        initial: Iterable[int],
        accepting: Iterable[int],
        guards: Mapping[Tuple[int, int], pr.Predicate],
        state_dim: int,
        deterministic: bool = False,
        complete: bool = False,
        regions: Optional[Mapping[str, pr.Region]] = None,
    ):
        self.n_locations: int = int(n_locations)
        self.initial: FrozenSet[int] = frozenset(initial)
        self.accepting: FrozenSet[int] = frozenset(accepting)
        self.state_dim: int = int(state_dim)
        self.deterministic: bool = bool(deterministic)
        self.complete: bool = bool(complete)
        # Region table the guards were written against, kept for serialization.
        self.regions: Dict[str, pr.Region] = dict(regions or {})

        if self.n_locations < 1:
            raise ValueError("An automaton has at least one location.")
        for name, locs in (("initial", self.initial), ("accepting", self.accepting)):
            if not locs:
                raise ValueError("The %s set must be nonempty." % name)
            bad = [q for q in locs if not 0 <= q < self.n_locations]
            if bad:
                raise ValueError(
                    "%s locations %s are outside [0, %d)." % (name, sorted(bad), self.n_locations)
                )

        self.guards: Dict[Tuple[int, int], pr.Predicate] = {}
        for (i, j), guard in sorted(guards.items()):
            if not (0 <= i < self.n_locations and 0 <= j < self.n_locations):
                raise ValueError("Transition (%d, %d) is outside the location set." % (i, j))
            if isinstance(guard, pr.FalseP):
                continue
            for atom in pr.atoms(guard):
                need = atom.mu.required_dim()
                if need > self.state_dim:
                    raise ShapeError(
                        "Guard (%d, %d) reads %d state dimensions; states have %d."
                        % (i, j, need, self.state_dim)
                    )
            self.guards[(i, j)] = guard

        self._successors: List[List[Tuple[int, pr.Predicate]]] = [
            [] for _ in range(self.n_locations)
        ]
        for (i, j), guard in self.guards.items():
            self._successors[i].append((j, guard))

    def __repr__(self):
        return "SymbolicAutomaton(locations=%d, transitions=%d, initial=%s, accepting=%s)" % (
            self.n_locations,
            len(self.guards),
            sorted(self.initial),
            sorted(self.accepting),
        )

    def __eq__(self, other):
        if not isinstance(other, SymbolicAutomaton):
            return NotImplemented
        return (
            self.n_locations == other.n_locations
            and self.initial == other.initial
            and self.accepting == other.accepting
            and self.state_dim == other.state_dim
            and self.deterministic == other.deterministic
            and self.complete == other.complete
            and self.guards == other.guards
        )

    def __hash__(self):
        return hash((self.n_locations, self.initial, self.accepting, len(self.guards)))

    def guard(self, i: int, j: int) -> pr.Predicate:
        return self.guards.get((i, j), pr.FALSE)

    def successors(self, i: int) -> List[Tuple[int, pr.Predicate]]:
        return self._successors[i]

    def transitions(self) -> Iterator[Tuple[int, int, pr.Predicate]]:
        for (i, j), guard in self.guards.items():
            yield i, j, guard


def _states(xi) -> List:
    return list(getattr(xi, "states", xi))


def _check_state(A: SymbolicAutomaton, x):
    if len(x) != A.state_dim:
        raise ShapeError(
            "Automaton reads states of dimension %d, got %d." % (A.state_dim, len(x))
        )


def alpha_beta(A: SymbolicAutomaton, s) -> Tuple[WVector, WVector]:
    sr = get_semiring(s)
    return (
        WVector.indicator(A.n_locations, A.initial, sr),
        WVector.indicator(A.n_locations, A.accepting, sr),
    )


def operator_matrix(A: SymbolicAutomaton, x, s) -> WMatrix:
    """Ae(x): entry (i, j) is the weight of guard (i, j) at x."""
    _check_state(A, x)
    sr = get_semiring(s)
    cache: Dict = {}
    rows = [[sr.zero] * A.n_locations for _ in range(A.n_locations)]
    for (i, j), guard in A.guards.items():
        rows[i][j] = pr.eval_weight(guard, x, sr, cache)
    return WMatrix(rows, sr, validate=False)


def step_weight_vector(
    q: WVector, x, A: SymbolicAutomaton, s, live: Optional[Set[int]] = None
) -> WVector:
    """q^T Ae(x), evaluating only the guards of rows where q is nonzero.

    Summation order matches vec_mat over the full operator matrix, so the
    result is identical. When live is given, rows outside it are skipped;
    the entries that can still reach an accepting location are unchanged.
    """
    sr = get_semiring(s)
    if len(q) != A.n_locations:
        raise ShapeError(
            "Weight vector has %d entries for %d locations." % (len(q), A.n_locations)
        )
    _check_state(A, x)
    cache: Dict = {}
    out: List[Weight] = [sr.zero] * A.n_locations
    for i, q_i in enumerate(q.entries):
        if sr.is_zero(q_i) or (live is not None and i not in live):
            continue
        for j, guard in A.successors(i):
            a_ij = pr.eval_weight(guard, x, sr, cache)
            if sr.is_zero(a_ij):
                continue
            out[j] = sr.add(out[j], sr.mul(q_i, a_ij))
    return WVector(out, sr, validate=False)


def trajectory_weight(
    A: SymbolicAutomaton,
    xi,
    s,
    q_init: Optional[WVector] = None,
    live: Optional[Set[int]] = None,
) -> Weight:
    """w_A(xi) = q_init^T Ae(x_0) ... Ae(x_l) beta, with q_init defaulting to alpha."""
    states = _states(xi)
    if not states:
        raise ValueError("Cannot weigh an empty trace.")
    alpha, beta = alpha_beta(A, s)
    q = alpha if q_init is None else q_init
    for x in states:
        q = step_weight_vector(q, x, A, s, live)
    return vec_dot(q, beta)


def prefix_weights(
    A: SymbolicAutomaton, xi, s, q_init: Optional[WVector] = None
) -> List[float]:
    """The weight of every prefix x_0 .. x_t of xi, as floats."""
    sr = get_semiring(s)
    alpha, beta = alpha_beta(A, sr)
    q = alpha if q_init is None else q_init
    weights = []
    for x in _states(xi):
        q = step_weight_vector(q, x, A, sr)
        weights.append(sr.to_float(vec_dot(q, beta)))
    return weights


def enumerate_runs(A: SymbolicAutomaton, xi, cap: Optional[int] = None) -> Set[Run]:
    """Every location sequence from an initial location that the trace drives."""
    states = _states(xi)
    cap = settings.enumeration_cap if cap is None else cap
    if A.n_locations ** (len(states) + 1) > cap:
        raise EnumerationCapError(
            "%d locations over %d states exceed the enumeration cap of %d."
            % (A.n_locations, len(states), cap)
        )
    for x in states:
        _check_state(A, x)
    frontier: List[Tuple[int, ...]] = [(q,) for q in sorted(A.initial)]
    for x in states:
        cache: Dict = {}
        extended = []
        for prefix in frontier:
            for j, guard in A.successors(prefix[-1]):
                if pr.eval_bool(guard, x, cache):
                    extended.append(prefix + (j,))
        frontier = extended
    return {Run(locs) for locs in frontier}


def accepts(A: SymbolicAutomaton, xi, cap: Optional[int] = None) -> bool:
    return any(run.last in A.accepting for run in enumerate_runs(A, xi, cap))


def reachable_locations(A: SymbolicAutomaton, xi) -> FrozenSet[int]:
    """The locations some run can occupy after reading xi (subset construction)."""
    current = set(A.initial)
    for x in _states(xi):
        _check_state(A, x)
        cache: Dict = {}
        current = {
            j
            for i in current
            for j, guard in A.successors(i)
            if pr.eval_bool(guard, x, cache)
        }
    return frozenset(current)


def live_locations(A: SymbolicAutomaton) -> FrozenSet[int]:
    """Locations with a path of present transitions to an accepting location."""
    predecessors: List[List[int]] = [[] for _ in range(A.n_locations)]
    for i, j, _ in A.transitions():
        predecessors[j].append(i)
    live = set(A.accepting)
    stack = list(A.accepting)
    while stack:
        j = stack.pop()
        for i in predecessors[j]:
            if i not in live:
                live.add(i)
                stack.append(i)
    return frozenset(live)


def sample_states(A: SymbolicAutomaton, count: int, seed: int = 0) -> np.ndarray:
    lo, hi = settings.sample_box
    rng = np.random.default_rng(seed)
    return rng.uniform(lo, hi, size=(count, A.state_dim))


def spot_check(
    A: SymbolicAutomaton, sample_count: Optional[int] = None, seed: int = 0
) -> List[str]:
    """Sample states and report violations of the deterministic / complete flags.

    Only the flags the automaton declares are checked. The same sampled
    states are used for every location.
    """
    if not (A.deterministic or A.complete):
        return []
    count = settings.sample_count if sample_count is None else sample_count
    problems = []
    for x in sample_states(A, count, seed):
        cache: Dict = {}
        for i in range(A.n_locations):
            enabled = [j for j, guard in A.successors(i) if pr.eval_bool(guard, x, cache)]
            if A.deterministic and len(enabled) > 1:
                problems.append(
                    "location %d enables %s at x=%s" % (i, enabled, np.round(x, 6).tolist())
                )
            if A.complete and not enabled:
                problems.append(
                    "location %d enables nothing at x=%s" % (i, np.round(x, 6).tolist())
                )
        if problems:
            break
    return problems


def complement(
    A: SymbolicAutomaton, sample_count: Optional[int] = None, seed: int = 0
) -> SymbolicAutomaton:
    """The automaton accepting exactly the traces A rejects.

    Raises:
        AutomatonPreconditionError: A is not flagged deterministic and
            complete, the sampled spot check refutes a flag, or every
            location of A is accepting.
    """
    missing = [f for f in ("deterministic", "complete") if not getattr(A, f)]
    if missing:
        raise AutomatonPreconditionError(
            "Complement needs a deterministic and complete automaton; "
            "%s is not flagged %s." % (A, " or ".join(missing))
        )
    problems = spot_check(A, sample_count, seed)
    if problems:
        raise AutomatonPreconditionError(
            "Complement precondition refuted by sampling: %s" % problems[0]
        )
    accepting = set(range(A.n_locations)) - A.accepting
    if not accepting:
        raise AutomatonPreconditionError(
            "Every location of %s is accepting; the complement accepts nothing." % A
        )
    return SymbolicAutomaton(
        A.n_locations,
        A.initial,
        accepting,
        A.guards,
        A.state_dim,
        deterministic=True,
        complete=True,
        regions=A.regions,
    )


def product(A1: SymbolicAutomaton, A2: SymbolicAutomaton) -> SymbolicAutomaton:
    """Synchronous product; location (i, j) has index i * |Q2| + j."""
    if A1.state_dim != A2.state_dim:
        raise ShapeError(
            "Cannot take the product of automata over dimensions %d and %d."
            % (A1.state_dim, A2.state_dim)
        )
    n2 = A2.n_locations

    def index(i, j):
        return i * n2 + j

    guards = {}
    for i, i2, g1 in A1.transitions():
        for j, j2, g2 in A2.transitions():
            guard = pr.conj(g1, g2)
            if not isinstance(guard, pr.FalseP):
                guards[(index(i, j), index(i2, j2))] = guard
    regions = dict(A1.regions)
    regions.update(A2.regions)
    return SymbolicAutomaton(
        A1.n_locations * n2,
        [index(i, j) for i in A1.initial for j in A2.initial],
        [index(i, j) for i in A1.accepting for j in A2.accepting],
        guards,
        A1.state_dim,
        deterministic=A1.deterministic and A2.deterministic,
        complete=A1.complete and A2.complete,
        regions=regions,
    )


def automaton_robustness(
    A: SymbolicAutomaton, xi, negation: Optional[SymbolicAutomaton] = None
) -> float:
    """w_A(xi) - w_notA(xi) under the minmax semiring.

    Positive exactly when A accepts xi, with magnitude the smallest guard
    violation that would flip the verdict. negation defaults to complement(A).

    A bottom weight counts as -inf. The result is +inf when no location
    path of len(xi) steps ends where A rejects, and -inf when none ends
    where A accepts.
    """
    profile = robustness_profile(A, xi, negation)
    if not profile:
        raise ValueError("Cannot weigh an empty trace.")
    return profile[-1]


def robustness_profile(
    A: SymbolicAutomaton, xi, negation: Optional[SymbolicAutomaton] = None
) -> List[float]:
    """automaton_robustness of every prefix x_0 .. x_t of xi."""
    negation = complement(A) if negation is None else negation
    accept = prefix_weights(A, xi, "minmax")
    reject = prefix_weights(negation, xi, "minmax")
    return [a - r for a, r in zip(accept, reject)]


# Serialization.


def to_dict(A: SymbolicAutomaton) -> dict:
    meta = {
        "locations": A.n_locations,
        "initial": sorted(A.initial),
        "accepting": sorted(A.accepting),
        "deterministic": A.deterministic,
        "complete": A.complete,
        "state_dim": A.state_dim,
        "transitions": [
            {"from": i, "to": j, "guard": pr.to_text(guard)}
            for (i, j), guard in sorted(A.guards.items())
        ],
    }
    if A.regions:
        meta["regions"] = {
            name: region.to_meta() for name, region in sorted(A.regions.items())
        }
    return meta


def from_dict(
    meta: Mapping,
    regions: Optional[Mapping[str, pr.Region]] = None,
    state_dim: Optional[int] = None,
    mu_cache: Optional[Dict] = None,
) -> SymbolicAutomaton:
    """Build an automaton from its file format.

    Regions embedded in meta are used unless a region table is passed in.
    state_dim falls back to the file, then to the widest guard.
    """
    if regions is None:
        regions = {
            name: pr.Region.from_meta(name, d) for name, d in meta.get("regions", {}).items()
        }
    mu_cache = {} if mu_cache is None else mu_cache
    guards = {}
    for t in meta.get("transitions", []):
        guards[(int(t["from"]), int(t["to"]))] = parse_predicate(t["guard"], regions, mu_cache)
    if state_dim is None:
        state_dim = meta.get("state_dim")
    if state_dim is None:
        dims = [a.mu.required_dim() for g in guards.values() for a in pr.atoms(g)]
        state_dim = max(dims, default=0)
        logging.getLogger(__name__).debug("inferred state_dim=%d from guards", state_dim)
    return SymbolicAutomaton(
        meta["locations"],
        meta["initial"],
        meta["accepting"],
        guards,
        state_dim,
        deterministic=meta.get("deterministic", False),
        complete=meta.get("complete", False),
        regions=regions,
    )


def to_json(A: SymbolicAutomaton) -> str:
    return json.dumps(to_dict(A), indent=2, sort_keys=True, ensure_ascii=False)


def from_json(text: str, regions: Optional[Mapping[str, pr.Region]] = None) -> SymbolicAutomaton:
    return from_dict(json.loads(text), regions)
