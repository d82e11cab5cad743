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


"""Discrete-time STL robustness.

The quantitative semantics are the usual min/max recursion; bounded and
unbounded temporal windows are truncated at the end of the finite trace.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from swamp.core.errors import EmptyWindowError
from swamp.spec.predicate import MuFunction


class StlFormula(object):
    pass


@dataclass(frozen=True)
class Pred(StlFormula):
    mu: MuFunction
    label: Optional[str] = None


@dataclass(frozen=True)
class Not(StlFormula):
    child: StlFormula


@dataclass(frozen=True)
class And(StlFormula):
    left: StlFormula
    right: StlFormula


@dataclass(frozen=True)
class Or(StlFormula):
    left: StlFormula
    right: StlFormula


@dataclass(frozen=True)
class Implies(StlFormula):
    left: StlFormula
    right: StlFormula


@dataclass(frozen=True)
class Alw(StlFormula):
    child: StlFormula
    a: int = 0
    b: Union[int, float] = math.inf

    def __post_init__(self):
        assert 0 <= self.a <= self.b, "Bad interval [%s, %s]" % (self.a, self.b)


@dataclass(frozen=True)
class Ev(StlFormula):
    child: StlFormula
    a: int = 0
    b: Union[int, float] = math.inf

    def __post_init__(self):
        assert 0 <= self.a <= self.b, "Bad interval [%s, %s]" % (self.a, self.b)


def as_signal(trace) -> np.ndarray:
    """A (T, n) float array from a Trace, a list of states or an array."""
    states = getattr(trace, "states", trace)
    arr = np.asarray([np.asarray(x, dtype=np.float64) for x in states])
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("Expected a nonempty trace of state vectors.")
    return arr


def _window(sig: np.ndarray, a: int, b, reduce, empty: float, strict: bool):
    T = len(sig)
    out = np.empty(T)
    if b == math.inf:
        # Suffix extrema answer every unbounded window at once.
        suffix = reduce.accumulate(sig[::-1])[::-1]
        for t in range(T):
            if t + a < T:
                out[t] = suffix[t + a]
            elif strict:
                raise EmptyWindowError("Empty window at t=%d." % t)
            else:
                out[t] = empty
        return out
    for t in range(T):
        lo, hi = t + a, min(t + int(b), T - 1)
        if lo > hi:
            if strict:
                raise EmptyWindowError("Empty window [%d, %d] at t=%d." % (a, b, t))
            out[t] = empty
        else:
            out[t] = reduce.reduce(sig[lo : hi + 1])
    return out


def robustness_signal(f: StlFormula, trace, strict: bool = False) -> np.ndarray:
    """rho(f, trace, t) for every t at once."""
    xs = trace if isinstance(trace, np.ndarray) and trace.ndim == 2 else as_signal(trace)
    return _signal(f, xs, strict)


def _signal(f: StlFormula, xs: np.ndarray, strict: bool) -> np.ndarray:
    if isinstance(f, Pred):
        return np.array([float(f.mu(x)) for x in xs])
    if isinstance(f, Not):
        return -_signal(f.child, xs, strict)
    if isinstance(f, And):
        return np.minimum(_signal(f.left, xs, strict), _signal(f.right, xs, strict))
    if isinstance(f, Or):
        return np.maximum(_signal(f.left, xs, strict), _signal(f.right, xs, strict))
    if isinstance(f, Implies):
        return np.maximum(-_signal(f.left, xs, strict), _signal(f.right, xs, strict))
    if isinstance(f, Alw):
        return _window(_signal(f.child, xs, strict), f.a, f.b, np.minimum, math.inf, strict)
    if isinstance(f, Ev):
        return _window(_signal(f.child, xs, strict), f.a, f.b, np.maximum, -math.inf, strict)
    raise TypeError("Unexpected formula %r" % (f,))


def robustness(f: StlFormula, trace, t: int = 0, strict: bool = False) -> float:
    xs = as_signal(trace)
    if not 0 <= t < len(xs):
        raise IndexError("t=%d is outside a trace of %d states." % (t, len(xs)))
    return float(_signal(f, xs, strict)[t])


def stl_accepts(f: StlFormula, trace, strict: bool = False) -> bool:
    return robustness(f, trace, 0, strict) >= 0.0


def satisfied(f: StlFormula, trace, t: int = 0) -> bool:
    """Boolean semantics by direct recursion, independent of the robustness code."""
    xs = as_signal(trace)
    return _holds(f, xs, t)


def _holds(f: StlFormula, xs: Sequence, t: int) -> bool:
    if isinstance(f, Pred):
        return float(f.mu(xs[t])) >= 0.0
    if isinstance(f, Not):
        return not _holds(f.child, xs, t)
    if isinstance(f, And):
        return _holds(f.left, xs, t) and _holds(f.right, xs, t)
    if isinstance(f, Or):
        return _holds(f.left, xs, t) or _holds(f.right, xs, t)
    if isinstance(f, Implies):
        return (not _holds(f.left, xs, t)) or _holds(f.right, xs, t)
    if isinstance(f, (Alw, Ev)):
        last = len(xs) - 1 if f.b == math.inf else min(t + int(f.b), len(xs) - 1)
        window = range(t + f.a, last + 1)
        if isinstance(f, Alw):
            return all(_holds(f.child, xs, s) for s in window)
        return any(_holds(f.child, xs, s) for s in window)
    raise TypeError("Unexpected formula %r" % (f,))
