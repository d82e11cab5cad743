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


from typing import Iterator, List, Sequence, Tuple

import numpy as np

from swamp.core.algebra.semiring import Semiring, Weight, get_semiring
from swamp.core.errors import ShapeError


class WVector(object):
    def __init__(self, entries: Sequence[Weight], s, validate: bool = True):
        self.semiring: Semiring = get_semiring(s)
        self.entries: Tuple[Weight, ...] = tuple(entries)
        if validate:
            for w in self.entries:
                self.semiring.check(w)

    @classmethod
    def zeros(cls, n: int, s) -> "WVector":
        sr = get_semiring(s)
        return cls([sr.zero] * n, sr, validate=False)

    @classmethod
    def indicator(cls, n: int, support, s) -> "WVector":
        sr = get_semiring(s)
        support = set(support)
        return cls(
            [sr.one if i in support else sr.zero for i in range(n)], sr, validate=False
        )

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i) -> Weight:
        return self.entries[i]

    def __iter__(self) -> Iterator[Weight]:
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, WVector):
            return NotImplemented
        return self.semiring is other.semiring and self.to_numpy().tolist() == (
            other.to_numpy().tolist()
        )

    def __repr__(self):
        return "WVector(%s, [%s])" % (
            self.semiring.tag.value,
            ", ".join(str(w) for w in self.entries),
        )

    def support(self) -> List[int]:
        return [i for i, w in enumerate(self.entries) if not self.semiring.is_zero(w)]

    def to_numpy(self) -> np.ndarray:
        return np.array([self.semiring.to_float(w) for w in self.entries])


class WMatrix(object):
    def __init__(self, rows: Sequence[Sequence[Weight]], s, validate: bool = True):
        self.semiring: Semiring = get_semiring(s)
        self.rows: Tuple[Tuple[Weight, ...], ...] = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        for r in self.rows:
            if len(r) != n:
                raise ShapeError("WMatrix must be square, got a row of %d in %d" % (len(r), n))
        if validate:
            for r in self.rows:
                for w in r:
                    self.semiring.check(w)

    @classmethod
    def zeros(cls, n: int, s) -> "WMatrix":
        sr = get_semiring(s)
        return cls([[sr.zero] * n for _ in range(n)], sr, validate=False)

    @classmethod
    def identity(cls, n: int, s) -> "WMatrix":
        sr = get_semiring(s)
        return cls(
            [[sr.one if i == j else sr.zero for j in range(n)] for i in range(n)],
            sr,
            validate=False,
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows)

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, ij) -> Weight:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, WMatrix):
            return NotImplemented
        return self.semiring is other.semiring and self.to_numpy().tolist() == (
            other.to_numpy().tolist()
        )

    def __repr__(self):
        return "WMatrix(%s, %s)" % (
            self.semiring.tag.value,
            [[str(w) for w in r] for r in self.rows],
        )

    def row(self, i: int) -> WVector:
        return WVector(self.rows[i], self.semiring, validate=False)

    def to_numpy(self) -> np.ndarray:
        to_float = self.semiring.to_float
        return np.array([[to_float(w) for w in r] for r in self.rows]).reshape(
            self.shape
        )


def _semiring_of(s, *operands) -> Semiring:
    if s is not None:
        return get_semiring(s)
    return operands[0].semiring


def mat_mul(A: WMatrix, B: WMatrix, s=None) -> WMatrix:
    sr = _semiring_of(s, A, B)
    if A.shape != B.shape:
        raise ShapeError("Cannot multiply %s by %s." % (A.shape, B.shape))
    n = len(A)
    rows = []
    for i in range(n):
        a_i = A.rows[i]
        row = [sr.zero] * n
        for k in range(n):
            a_ik = a_i[k]
            if sr.is_zero(a_ik):
                continue
            b_k = B.rows[k]
            for j in range(n):
                b_kj = b_k[j]
                if sr.is_zero(b_kj):
                    continue
                row[j] = sr.add(row[j], sr.mul(a_ik, b_kj))
        rows.append(row)
    return WMatrix(rows, sr, validate=False)


def vec_mat(q: WVector, A: WMatrix, s=None) -> WVector:
    sr = _semiring_of(s, q, A)
    if len(q) != len(A):
        raise ShapeError("Cannot multiply a vector of %d by %s." % (len(q), A.shape))
    n = len(A)
    out = [sr.zero] * n
    for i in range(n):
        q_i = q.entries[i]
        if sr.is_zero(q_i):
            continue
        a_i = A.rows[i]
        for j in range(n):
            a_ij = a_i[j]
            if sr.is_zero(a_ij):
                continue
            out[j] = sr.add(out[j], sr.mul(q_i, a_ij))
    return WVector(out, sr, validate=False)


def vec_dot(q: WVector, r: WVector, s=None) -> Weight:
    """The semiring inner product, e.g. q^T beta."""
    sr = _semiring_of(s, q, r)
    if len(q) != len(r):
        raise ShapeError("Cannot contract vectors of %d and %d." % (len(q), len(r)))
    result = sr.zero
    for q_i, r_i in zip(q.entries, r.entries):
        if sr.is_zero(q_i) or sr.is_zero(r_i):
            continue
        result = sr.add(result, sr.mul(q_i, r_i))
    return result
