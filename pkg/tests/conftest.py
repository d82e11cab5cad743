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

import json
import random

import numpy as np
import pytest

from swamp.automaton.automaton import SymbolicAutomaton
from swamp.spec import predicate as pr


# pylint: disable=import-outside-toplevel


def pytest_collection_modifyitems(config, items):
    keywordexpr = config.option.keyword
    markexpr = config.option.markexpr
    if keywordexpr or markexpr:
        return  # let pytest handle this

    skip_slow = pytest.mark.skip(reason="slow tests not selected.")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def pytest_addoption(parser):
    parser.addoption("--backend-name")


@pytest.fixture
def backend(request):
    from swamp.core import application_manager
    from swamp.core import settings

    previous = settings.backend_name
    settings.backend_name = request.config.getoption("--backend-name") or "serial"
    application_manager.destroy()
    yield application_manager.instance()
    application_manager.destroy()
    settings.backend_name = previous


@pytest.fixture(autouse=True)
def _reset_random():
    np.random.seed(1331)
    random.seed(1331)


@pytest.fixture
def regions():
    return {
        "red": pr.Region("red", "box", (0, 1), lo=(0.5, -1.2), hi=(1.2, -0.5)),
        "green": pr.Region("green", "box", (0, 1), lo=(-1.2, 0.5), hi=(-0.5, 1.2)),
        "blue": pr.Region("blue", "box", (0, 1), lo=(-0.4, -0.4), hi=(0.4, 0.4)),
        "star": pr.Region("star", "ball", (0, 1), center=(1.0, 1.0), radius=0.2),
        "right": pr.Region("right", "box", (0,), lo=(0.0,), hi=(10.0,)),
    }


def halfplane(w, b, label=None) -> pr.Atom:
    """The atom w . x + b >= 0."""
    return pr.Atom(pr.Affine(tuple(float(v) for v in w), float(b)), label)


def random_predicate(rng: np.random.Generator, dim: int, depth: int = 2) -> pr.Predicate:
    roll = rng.random()
    if depth == 0 or roll < 0.4:
        if roll < 0.05:
            return pr.TRUE
        # Coefficients on a coarse grid so that ties with 0 actually occur.
        w = rng.integers(-2, 3, size=dim) / 2.0
        b = rng.integers(-2, 3) / 2.0
        return halfplane(w, b)
    left = random_predicate(rng, dim, depth - 1)
    right = random_predicate(rng, dim, depth - 1)
    return pr.And(left, right) if roll < 0.7 else pr.Or(left, right)


def random_automaton(seed: int, n: int = 3, dim: int = 2, density: float = 0.6) -> SymbolicAutomaton:
    rng = np.random.default_rng(seed)
    guards = {}
    for i in range(n):
        for j in range(n):
            if rng.random() < density:
                guards[(i, j)] = random_predicate(rng, dim)
    initial = [int(q) for q in rng.choice(n, size=rng.integers(1, n + 1), replace=False)]
    accepting = [int(q) for q in rng.choice(n, size=rng.integers(1, n + 1), replace=False)]
    return SymbolicAutomaton(n, initial, accepting, guards, dim)


def random_trace(seed: int, length: int, dim: int = 2):
    rng = np.random.default_rng(seed)
    # Half-integers make atoms hit their boundary now and then.
    return (rng.integers(-4, 5, size=(length, dim)) / 2.0).tolist()


@pytest.fixture
def automaton_factory():
    return random_automaton


@pytest.fixture
def trace_factory():
    return random_trace


@pytest.fixture
def atom():
    return halfplane


@pytest.fixture
def predicate_factory():
    return random_predicate


def random_dfa(seed: int, n: int = 3, dim: int = 2) -> SymbolicAutomaton:
    """A deterministic, complete automaton: every location splits on one halfplane."""
    rng = np.random.default_rng(seed)
    guards = {}
    for i in range(n):
        w = rng.uniform(-1, 1, size=dim)
        h = halfplane(w, rng.uniform(-1, 1))
        j1, j2 = (int(j) for j in rng.integers(0, n, size=2))
        if j1 == j2:
            guards[(i, j1)] = pr.TRUE
        else:
            guards[(i, j1)] = h
            guards[(i, j2)] = pr.negate(h)
    accepting = rng.choice(n, size=rng.integers(1, n), replace=False)
    return SymbolicAutomaton(
        n, [0], [int(q) for q in accepting], guards, dim, deterministic=True, complete=True
    )


@pytest.fixture
def dfa_factory():
    return random_dfa


def reach_document(**changes) -> dict:
    """A single-integrator scenario that reaches one box from (-1, -1)."""
    doc = {
        "name": "reach",
        "regions": {"goal": {"kind": "box", "lo": [0.5, -1.2], "hi": [1.0, -0.8]}},
        "automaton": {"builder": "sequence_visit", "regions": ["goal"]},
        "stl_formula": "F in(goal)",
        "dynamics": {"kind": "single_integrator", "x0": [-1.0, -1.0]},
        "planner": {"horizon": 10, "learning_rate": 1.0, "epochs": 50},
        "mpc": {"horizon": 5, "epochs": 20, "total_steps": 25},
    }
    doc.update(changes)
    return doc


@pytest.fixture
def scenario_file(tmp_path):
    def write(filename="reach.json", **changes) -> str:
        path = tmp_path / filename
        path.write_text(json.dumps(reach_document(**changes)), encoding="utf-8")
        return str(path)

    return write
