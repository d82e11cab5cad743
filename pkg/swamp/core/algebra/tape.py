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


"""Reverse-mode automatic differentiation over scalar tapes.

A TapeGraph records every elementary operation applied to a Var, in the
order it was applied, so node ids are a topological order by construction.
Operations whose operands are all plain floats are evaluated directly and
leave no trace; mixing a float with a Var records the float as a constant.
"""

import math
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from swamp.core.errors import GradientUndefinedError, TapeStructureError


_BINARY = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "max": lambda a, b: a if a >= b else b,
    "min": lambda a, b: a if a <= b else b,
}

_UNARY = {
    "neg": lambda a: -a,
    "sin": math.sin,
    "cos": math.cos,
    "sqrt": math.sqrt,
    "square": lambda a: a * a,
    "abs": abs,
}

_LEAVES = ("input", "const")


class Var(object):
    __slots__ = ("tape", "idx")

    def __init__(self, tape: "TapeGraph", idx: int):
        self.tape = tape
        self.idx = idx

    @property
    def value(self) -> float:
        return self.tape.values[self.idx]

    def __float__(self):
        # Detaches: the result no longer carries gradient.
        return float(self.value)

    def __repr__(self):
        return "Var(id=%d, op=%s, value=%r)" % (
            self.idx,
            self.tape.ops[self.idx],
            self.value,
        )

    def __add__(self, other):
        return _binary("add", self, other)

    def __radd__(self, other):
        return _binary("add", other, self)

    def __sub__(self, other):
        return _binary("sub", self, other)

    def __rsub__(self, other):
        return _binary("sub", other, self)

    def __mul__(self, other):
        return _binary("mul", self, other)

    def __rmul__(self, other):
        return _binary("mul", other, self)

    def __truediv__(self, other):
        return _binary("div", self, other)

    def __rtruediv__(self, other):
        return _binary("div", other, self)

    def __neg__(self):
        return _unary("neg", self)

    def __pos__(self):
        return self


Scalar = Union[float, Var]


class TapeGraph(object):
    def __init__(self):
        self.ops: List[str] = []
        self.args: List[Tuple[int, ...]] = []
        self.values: List[float] = []
        self.inputs: List[int] = []
        self.output: Optional[int] = None
        # Set when the recorded output is an absorbing semiring element.
        self.output_symbol = None

    def __len__(self):
        return len(self.ops)

    def __repr__(self):
        return "TapeGraph(nodes=%d, inputs=%d, output=%s)" % (
            len(self),
            len(self.inputs),
            str(self.output),
        )

    @property
    def nodes(self) -> List[Tuple[str, Tuple[int, ...], float]]:
        return list(zip(self.ops, self.args, self.values))

    def record(self, op: str, args: Tuple[int, ...], value: float) -> Var:
        self.ops.append(op)
        self.args.append(args)
        self.values.append(value)
        return Var(self, len(self.ops) - 1)

    def input(self, value: float) -> Var:
        var = self.record("input", (), float(value))
        self.inputs.append(var.idx)
        return var

    def inputs_from(self, values: Iterable[float]) -> List[Var]:
        return [self.input(v) for v in values]

    def const(self, value: float) -> Var:
        return self.record("const", (), float(value))

    def set_output(self, weight) -> "TapeGraph":
        if isinstance(weight, Var):
            assert weight.tape is self, "Output was recorded on another tape."
            self.output = weight.idx
            self.output_symbol = None
        elif isinstance(weight, (int, float)):
            self.output = self.const(weight).idx
            self.output_symbol = None
        else:
            # An absorbing element (e.g. bottom) has no node of its own.
            self.output = None
            self.output_symbol = weight
        return self

    def output_value(self):
        if self.output_symbol is not None:
            return self.output_symbol
        if self.output is None:
            raise TapeStructureError("Tape has no output.")
        return self.values[self.output]


def value_of(x):
    if isinstance(x, Var):
        return x.value
    return x


def is_var(x) -> bool:
    return isinstance(x, Var)


def _tape_of(*xs) -> Optional[TapeGraph]:
    tape = None
    for x in xs:
        if isinstance(x, Var):
            if tape is None:
                tape = x.tape
            else:
                assert tape is x.tape, "Operands were recorded on different tapes."
    return tape


def _node(tape: TapeGraph, x) -> int:
    if isinstance(x, Var):
        return x.idx
    return tape.const(x).idx


def _binary(op: str, a, b):
    tape = _tape_of(a, b)
    fn = _BINARY[op]
    if tape is None:
        return fn(a, b)
    ia, ib = _node(tape, a), _node(tape, b)
    return tape.record(op, (ia, ib), fn(tape.values[ia], tape.values[ib]))


def _unary(op: str, a):
    fn = _UNARY[op]
    if not isinstance(a, Var):
        return fn(a)
    return a.tape.record(op, (a.idx,), fn(a.value))


def maximum(a: Scalar, b: Scalar) -> Scalar:
    return _binary("max", a, b)


def minimum(a: Scalar, b: Scalar) -> Scalar:
    return _binary("min", a, b)


def sin(a: Scalar) -> Scalar:
    return _unary("sin", a)


def cos(a: Scalar) -> Scalar:
    return _unary("cos", a)


def sqrt(a: Scalar) -> Scalar:
    return _unary("sqrt", a)


def square(a: Scalar) -> Scalar:
    return _unary("square", a)


def absolute(a: Scalar) -> Scalar:
    return _unary("abs", a)


def reduce_min(xs: Sequence[Scalar]) -> Scalar:
    result = xs[0]
    for x in xs[1:]:
        result = minimum(result, x)
    return result


def reduce_max(xs: Sequence[Scalar]) -> Scalar:
    result = xs[0]
    for x in xs[1:]:
        result = maximum(result, x)
    return result


def dot(w: Sequence[float], xs: Sequence[Scalar], b: float = 0.0) -> Scalar:
    """w . xs + b, skipping zero coefficients so they leave no nodes behind."""
    result: Scalar = b
    for w_i, x_i in zip(w, xs):
        if w_i == 0.0:
            continue
        result = result + w_i * x_i
    return result


def _check_structure(g: TapeGraph):
    n = len(g.ops)
    if not len(g.args) == len(g.values) == n:
        raise TapeStructureError("Tape columns have different lengths.")
    for i in range(n):
        op, args = g.ops[i], g.args[i]
        if op in _LEAVES:
            arity = 0
        elif op in _BINARY:
            arity = 2
        elif op in _UNARY:
            arity = 1
        else:
            raise TapeStructureError("Node %d has unknown op %r." % (i, op))
        if len(args) != arity:
            raise TapeStructureError(
                "Node %d (%s) expects %d operands, got %d." % (i, op, arity, len(args))
            )
        for j in args:
            if j < 0:
                raise TapeStructureError("Node %d has missing operand %d." % (i, j))
            if j >= i:
                # Forward or self references break the topological order.
                raise TapeStructureError(
                    "Node %d consumes node %d, which does not precede it." % (i, j)
                )
    for i in g.inputs:
        if not 0 <= i < n or g.ops[i] != "input":
            raise TapeStructureError("Input id %d is not an input node." % i)
    if g.output is not None and not 0 <= g.output < n:
        raise TapeStructureError("Output id %d is missing." % g.output)


def forward_values(g: TapeGraph) -> List[float]:
    """Re-evaluate every node from the leaves, without touching the cache."""
    _check_structure(g)
    values: List[float] = []
    for op, args, cached in zip(g.ops, g.args, g.values):
        if op in _LEAVES:
            values.append(cached)
        elif op in _BINARY:
            values.append(_BINARY[op](values[args[0]], values[args[1]]))
        else:
            values.append(_UNARY[op](values[args[0]]))
    return values


def tape_eval(g: TapeGraph):
    if g.output_symbol is not None:
        _check_structure(g)
        return g.output_symbol
    if g.output is None:
        raise TapeStructureError("Tape has no output.")
    return forward_values(g)[g.output]


def kink_margin(g: TapeGraph) -> float:
    """The smallest distance of any max, min or abs node from its kink.

    For max and min it is the gap between the two operands; for abs the
    distance of the operand from zero. Infinite operands and tapes without
    such nodes give inf.
    """
    margin = math.inf
    values = g.values
    for op, args in zip(g.ops, g.args):
        if op == "max" or op == "min":
            gap = abs(values[args[0]] - values[args[1]])
        elif op == "abs":
            gap = abs(values[args[0]])
        else:
            continue
        if not math.isnan(gap):
            margin = min(margin, gap)
    return margin


def tape_grad(g: TapeGraph, wrt: Optional[Sequence[int]] = None) -> np.ndarray:
    """Reverse pass from the output to the nodes in wrt (default: all inputs).

    Subgradient conventions: max/min route the full adjoint to the winning
    operand and, on exact ties, to the operand with the lowest node id.
    """
    if g.output_symbol is not None:
        raise GradientUndefinedError(
            "Output is %s; the weight has no gradient." % str(g.output_symbol)
        )
    if g.output is None:
        raise TapeStructureError("Tape has no output.")
    wrt = list(g.inputs) if wrt is None else list(wrt)
    ops, args, values = g.ops, g.args, g.values
    adj = [0.0] * (g.output + 1)
    adj[g.output] = 1.0
    for i in range(g.output, -1, -1):
        gi = adj[i]
        if gi == 0.0:
            continue
        op = ops[i]
        if op in _LEAVES:
            continue
        a = args[i][0]
        if op == "add":
            adj[a] += gi
            adj[args[i][1]] += gi
        elif op == "sub":
            adj[a] += gi
            adj[args[i][1]] -= gi
        elif op == "mul":
            b = args[i][1]
            adj[a] += gi * values[b]
            adj[b] += gi * values[a]
        elif op == "div":
            b = args[i][1]
            vb = values[b]
            adj[a] += gi / vb
            adj[b] -= gi * values[a] / (vb * vb)
        elif op == "max" or op == "min":
            b = args[i][1]
            va, vb = values[a], values[b]
            if va == vb:
                winner = min(a, b)
            elif (va > vb) == (op == "max"):
                winner = a
            else:
                winner = b
            adj[winner] += gi
        elif op == "neg":
            adj[a] -= gi
        elif op == "sin":
            adj[a] += gi * math.cos(values[a])
        elif op == "cos":
            adj[a] -= gi * math.sin(values[a])
        elif op == "sqrt":
            root = values[i]
            if root > 0.0:
                adj[a] += gi * 0.5 / root
        elif op == "square":
            adj[a] += 2.0 * gi * values[a]
        elif op == "abs":
            va = values[a]
            if va != 0.0:
                adj[a] += gi if va > 0.0 else -gi
        else:
            raise TapeStructureError("Node %d has unknown op %r." % (i, op))
    grad = np.zeros(len(wrt), dtype=np.float64)
    for k, i in enumerate(wrt):
        if i <= g.output:
            grad[k] = adj[i]
    return grad
