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


import math
from enum import Enum
from typing import Dict, Iterable, Union

from swamp.core.algebra import tape as ad
from swamp.core.algebra.tape import Var
from swamp.core.errors import DomainError


class Absorbing(object):
    """An explicit infinite carrier element (bottom or top).

    Absorbing elements are singletons compared by identity, so annihilation
    is exact and never goes through floating-point infinities.
    """

    __slots__ = ("name", "symbol", "sign")

    def __init__(self, name: str, symbol: str, sign: int):
        self.name = name
        self.symbol = symbol
        self.sign = sign

    def __repr__(self):
        return self.symbol

    def __str__(self):
        return self.symbol

    def __float__(self):
        return self.sign * math.inf

    def __reduce__(self):
        return _absorbing, (self.name,)


BOTTOM = Absorbing("bottom", "⊥", -1)
TOP = Absorbing("top", "⊤∞", 1)


def _absorbing(name: str) -> Absorbing:
    return {"bottom": BOTTOM, "top": TOP}[name]


Weight = Union[float, Var, Absorbing]


class SemiringTag(str, Enum):
    boolean = "boolean"
    minmax = "minmax"
    maxplus = "maxplus"
    minplus = "minplus"

    def __str__(self):
        return self.value


class Semiring(object):
    """The carrier and operations fixed by a SemiringTag.

    Implementations operate on plain floats, absorbing elements, and tape
    Vars alike; operations on Vars are recorded on their tape.
    """

    tag: SemiringTag = None
    zero: Weight = None
    one: Weight = None

    def __repr__(self):
        return "Semiring(%s)" % self.tag.value

    def in_carrier(self, value: float) -> bool:
        raise NotImplementedError()

    def add(self, a: Weight, b: Weight) -> Weight:
        raise NotImplementedError()

    def mul(self, a: Weight, b: Weight) -> Weight:
        raise NotImplementedError()

    def atom(self, mu) -> Weight:
        """The generalized weight of an atom mu(x) >= 0 given mu's value."""
        raise NotImplementedError()

    def is_zero(self, w: Weight) -> bool:
        if isinstance(self.zero, Absorbing):
            return w is self.zero
        return not isinstance(w, Var) and w == self.zero

    def is_one(self, w: Weight) -> bool:
        return not isinstance(w, (Var, Absorbing)) and w == self.one

    def check(self, w: Weight) -> Weight:
        if isinstance(w, Absorbing):
            if w is not self.zero:
                raise DomainError("%s is not in the %s carrier." % (w, self.tag.value))
            return w
        value = ad.value_of(w)
        if not isinstance(value, (int, float)) or not self.in_carrier(value):
            raise DomainError(
                "%r is not in the %s carrier." % (value, self.tag.value)
            )
        return w

    def sum(self, ws: Iterable[Weight]) -> Weight:
        result = self.zero
        for w in ws:
            result = self.add(result, w)
        return result

    def prod(self, ws: Iterable[Weight]) -> Weight:
        result = self.one
        for w in ws:
            result = self.mul(result, w)
        return result

    def to_float(self, w: Weight) -> float:
        if isinstance(w, Absorbing):
            return float(w)
        return float(ad.value_of(w))


class BooleanSemiring(Semiring):
    tag = SemiringTag.boolean
    zero = 0.0
    one = 1.0

    def in_carrier(self, value: float) -> bool:
        return value == 0.0 or value == 1.0

    def add(self, a: Weight, b: Weight) -> Weight:
        return ad.maximum(a, b)

    def mul(self, a: Weight, b: Weight) -> Weight:
        return ad.minimum(a, b)

    def atom(self, mu) -> Weight:
        return self.one if ad.value_of(mu) >= 0.0 else self.zero


class MinMaxSemiring(Semiring):
    tag = SemiringTag.minmax
    zero = BOTTOM
    one = 0.0

    def in_carrier(self, value: float) -> bool:
        return value <= 0.0

    def add(self, a: Weight, b: Weight) -> Weight:
        if a is BOTTOM:
            return b
        if b is BOTTOM:
            return a
        return ad.maximum(a, b)

    def mul(self, a: Weight, b: Weight) -> Weight:
        if a is BOTTOM or b is BOTTOM:
            return BOTTOM
        return ad.minimum(a, b)

    def atom(self, mu) -> Weight:
        return self.one if ad.value_of(mu) >= 0.0 else mu


class MaxPlusSemiring(Semiring):
    tag = SemiringTag.maxplus
    zero = BOTTOM
    one = 0.0

    def in_carrier(self, value: float) -> bool:
        return value <= 0.0

    def add(self, a: Weight, b: Weight) -> Weight:
        if a is BOTTOM:
            return b
        if b is BOTTOM:
            return a
        return ad.maximum(a, b)

    def mul(self, a: Weight, b: Weight) -> Weight:
        if a is BOTTOM or b is BOTTOM:
            return BOTTOM
        return a + b

    def atom(self, mu) -> Weight:
        return self.one if ad.value_of(mu) >= 0.0 else mu


class MinPlusSemiring(Semiring):
    tag = SemiringTag.minplus
    zero = TOP
    one = 0.0

    def in_carrier(self, value: float) -> bool:
        return value >= 0.0 and not math.isinf(value)

    def add(self, a: Weight, b: Weight) -> Weight:
        if a is TOP:
            return b
        if b is TOP:
            return a
        return ad.minimum(a, b)

    def mul(self, a: Weight, b: Weight) -> Weight:
        if a is TOP or b is TOP:
            return TOP
        return a + b

    def atom(self, mu) -> Weight:
        # A violated atom costs its violation.
        return self.one if ad.value_of(mu) >= 0.0 else -mu


_semirings: Dict[SemiringTag, Semiring] = {
    SemiringTag.boolean: BooleanSemiring(),
    SemiringTag.minmax: MinMaxSemiring(),
    SemiringTag.maxplus: MaxPlusSemiring(),
    SemiringTag.minplus: MinPlusSemiring(),
}


def get_semiring(s: Union[str, SemiringTag, Semiring]) -> Semiring:
    if isinstance(s, Semiring):
        return s
    try:
        return _semirings[SemiringTag(s)]
    except ValueError as e:
        raise ValueError(
            "Unknown semiring %r; expected one of %s."
            % (s, ", ".join(t.value for t in SemiringTag))
        ) from e


def sr_add(a: Weight, b: Weight, s) -> Weight:
    sr = get_semiring(s)
    return sr.add(sr.check(a), sr.check(b))


def sr_mul(a: Weight, b: Weight, s) -> Weight:
    sr = get_semiring(s)
    return sr.mul(sr.check(a), sr.check(b))
