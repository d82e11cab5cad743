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


"""Automata for the planning tasks: ordered visits, visits in any order with
dwell times, and invariants with bounded responses.

Every builder adds one rejecting sink with a true self-loop, entered as soon
as an avoided region (or a violated invariant) is read. The builders flag
their output deterministic and complete: outgoing guards of a location are
pairwise complementary up to the closed boundary mu(x) = 0.
"""

import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

from swamp.automaton.automaton import SymbolicAutomaton
from swamp.core import settings
from swamp.core.errors import AutomatonPreconditionError
from swamp.spec import predicate as pr


Goal = Union[pr.Region, pr.Predicate]


def region_atom(region: pr.Region) -> pr.Atom:
    return pr.Atom(region.inside(), "in(%s)" % region.name)


def _as_predicate(goal: Goal, atoms: Dict[str, pr.Atom]) -> pr.Predicate:
    if isinstance(goal, pr.Region):
        if goal.name not in atoms:
            atoms[goal.name] = region_atom(goal)
        return atoms[goal.name]
    return goal


def _regions_of(*groups) -> Dict[str, pr.Region]:
    return {g.name: g for group in groups for g in group if isinstance(g, pr.Region)}


def _state_dim(preds: Sequence[pr.Predicate], state_dim: Optional[int]) -> int:
    if state_dim is not None:
        return state_dim
    dims = [a.mu.required_dim() for p in preds for a in pr.atoms(p)]
    return max(dims, default=0)


def _safety(avoid: Sequence[Goal], atoms: Dict[str, pr.Atom]) -> Tuple[pr.Predicate, pr.Predicate]:
    """(safe, unsafe) for a list of regions to avoid."""
    hazards = [_as_predicate(a, atoms) for a in avoid]
    unsafe = pr.disj(*hazards)
    safe = pr.conj(*(pr.negate(h) for h in hazards))
    return safe, unsafe


def build_sequence_visit(
    regions: Sequence[Goal],
    avoid: Sequence[Goal] = (),
    state_dim: Optional[int] = None,
) -> SymbolicAutomaton:
    """Visit regions[0], then regions[1], ... while never entering avoid.

    Locations 0..k track progress (k = len(regions), accepting), k + 1 is
    the sink.
    """
    if not regions:
        raise ValueError("build_sequence_visit needs at least one region.")
    atoms: Dict[str, pr.Atom] = {}
    goals = [_as_predicate(r, atoms) for r in regions]
    safe, unsafe = _safety(avoid, atoms)
    k = len(goals)
    sink = k + 1
    guards = {}
    for i, goal in enumerate(goals):
        guards[(i, i + 1)] = pr.conj(goal, safe)
        guards[(i, i)] = pr.conj(pr.negate(goal), safe)
        guards[(i, sink)] = unsafe
    guards[(k, k)] = safe
    guards[(k, sink)] = unsafe
    guards[(sink, sink)] = pr.TRUE
    return SymbolicAutomaton(
        k + 2,
        [0],
        [k],
        guards,
        _state_dim(goals + [safe], state_dim),
        deterministic=True,
        complete=True,
        regions=_regions_of(regions, avoid),
    )


def build_any_order_visit(
    goals: Sequence[Goal],
    dwell: Union[int, Sequence[int]] = 1,
    avoid: Sequence[Goal] = (),
    state_dim: Optional[int] = None,
) -> SymbolicAutomaton:
    """Visit every goal, in any order, each for dwell consecutive states.

    Each goal gets a counter 0..dwell that advances on a state inside the
    goal, resets to 0 on a state outside it, and stays at dwell once reached.
    Locations are the tuples of counters (in mixed radix, first goal most
    significant) followed by the sink; the all-complete tuple is accepting.
    """
    if not goals:
        raise ValueError("build_any_order_visit needs at least one goal.")
    dwells = [int(dwell)] * len(goals) if isinstance(dwell, int) else [int(d) for d in dwell]
    if len(dwells) != len(goals):
        raise ValueError("Got %d dwell times for %d goals." % (len(dwells), len(goals)))
    if any(d < 1 for d in dwells):
        raise ValueError("Dwell times must be at least 1, got %s." % dwells)
    n_counters = 1
    for d in dwells:
        n_counters *= d + 1
    if n_counters + 1 > settings.max_locations:
        raise AutomatonPreconditionError(
            "Any-order visit of %d goals with dwell %s needs %d locations; the limit is %d."
            % (len(goals), dwells, n_counters + 1, settings.max_locations)
        )

    atoms: Dict[str, pr.Atom] = {}
    preds = [_as_predicate(g, atoms) for g in goals]
    safe, unsafe = _safety(avoid, atoms)
    sink = n_counters
    radices = [d + 1 for d in dwells]

    def index(counters: Sequence[int]) -> int:
        idx = 0
        for c, r in zip(counters, radices):
            idx = idx * r + c
        return idx

    guards = {}
    for counters in itertools.product(*(range(r) for r in radices)):
        i = index(counters)
        # Per goal: the (next counter, guard) choices.
        moves: List[List[Tuple[int, pr.Predicate]]] = []
        for c, d, p in zip(counters, dwells, preds):
            if c == d:
                moves.append([(d, pr.TRUE)])
            else:
                moves.append([(c + 1, p), (0, pr.negate(p))])
        for choice in itertools.product(*moves):
            j = index([nxt for nxt, _ in choice])
            guards[(i, j)] = pr.conj(*(g for _, g in choice), safe)
        guards[(i, sink)] = unsafe
    guards[(sink, sink)] = pr.TRUE
    logging.getLogger(__name__).debug(
        "any-order visit: %d goals, dwell %s, %d locations", len(goals), dwells, sink + 1
    )
    return SymbolicAutomaton(
        sink + 1,
        [index([0] * len(goals))],
        [index(dwells)],
        guards,
        _state_dim(preds + [safe], state_dim),
        deterministic=True,
        complete=True,
        regions=_regions_of(goals, avoid),
    )


def build_bounded_response(
    invariant: pr.Predicate,
    trigger: pr.Predicate,
    response: pr.Predicate,
    within: int,
    state_dim: Optional[int] = None,
    regions: Optional[Dict[str, pr.Region]] = None,
) -> SymbolicAutomaton:
    """Always invariant, and every trigger is answered by a response within
    `within` steps (the triggering state included).

    Location 0 has no pending trigger and is accepting. Location c in
    1..within means the oldest unanswered trigger was read c states ago.
    Location within + 1 is the sink.
    """
    if within < 0:
        raise ValueError("within must be nonnegative, got %d." % within)
    sink = within + 1
    bad = pr.negate(invariant)
    quiet = pr.conj(invariant, pr.disj(pr.negate(trigger), response))
    raised = pr.conj(invariant, trigger, pr.negate(response))
    answered = pr.conj(invariant, response)
    pending = pr.conj(invariant, pr.negate(response))

    guards = {}

    def add(i, j, g):
        # The overdue move and the sink move may share a target.
        guards[(i, j)] = pr.disj(guards[(i, j)], g) if (i, j) in guards else g

    add(0, 0, quiet)
    add(0, 1 if within >= 1 else sink, raised)
    add(0, sink, bad)
    for c in range(1, within + 1):
        add(c, 0, answered)
        add(c, c + 1 if c < within else sink, pending)
        add(c, sink, bad)
    add(sink, sink, pr.TRUE)
    return SymbolicAutomaton(
        within + 2,
        [0],
        [0],
        guards,
        _state_dim([invariant, trigger, response], state_dim),
        deterministic=True,
        complete=True,
        regions=regions,
    )
