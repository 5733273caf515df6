"""Generalized Taylor difference operators and their polynomial chains.

An operator of size d+1 is determined by weight vectors w_1, ..., w_d where
w_j = (w_{j,1}, ..., w_{j,j}) and w_{j,j} = 1. Acting on a column of
sequences (degree-descending Hermite layout, function value on top), row i
of the complete operator is

    (T c)_i = Delta c_i - sum_{k>i} w_{k,i+1} c_k ,

and the incomplete variant replaces the last row by the identity. The
classical choice w_{k,m} = 1/(k-m+1)! recovers the usual Taylor remainder
differences; the pure-difference choice w_j = (0,...,0,1) makes every row an
iterated forward difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .exactalg import LaurentMatrix, LaurentPoly, RationalLike, delta_symbol, rat_from_str, rat_to_str
from .polybasis import NotInVd, Poly, PolyVec, antidifference


class InvalidOperator(Exception):
    """Raised for weight tables violating the w_{j,j} = 1 shape."""


class NotAChain(Exception):
    """Raised when a purported chain fails compatibility between levels."""


class WindowTooSmall(Exception):
    """Raised when sampled data is too short for a difference stencil."""


@dataclass(frozen=True)
class TaylorOperator:
    """Weight table plus the complete/incomplete flag.

    w[j-1] holds (w_{j,1}, ..., w_{j,j}); the table for size d+1 has d rows.
    """

    w: tuple[tuple[Fraction, ...], ...]
    complete: bool = True

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.w)
        object.__setattr__(self, "w", rows)
        for j, row in enumerate(rows, start=1):
            if len(row) != j:
                raise InvalidOperator(f"w_{j} must have length {j}, got {len(row)}")
            if row[-1] != 1:
                raise InvalidOperator(f"w_{j},{j} must equal 1, got {row[-1]}")

    @property
    def d(self) -> int:
        return len(self.w)

    def constant_entry(self, i: int, k: int) -> Fraction:
        """Matrix entry (i, k) above the diagonal: -w_{k,i+1} (0-based)."""
        if not 0 <= i < k <= self.d:
            raise IndexError("constant entries live strictly above the diagonal")
        return -self.w[k - 1][i]

    def sub_operator(self, j: int) -> "TaylorOperator":
        """The size-(j+1) operator acting on the top of the column."""
        return TaylorOperator(self.w[:j], self.complete)

    def as_complete(self) -> "TaylorOperator":
        return self if self.complete else TaylorOperator(self.w, True)

    def as_incomplete(self) -> "TaylorOperator":
        return TaylorOperator(self.w, False) if self.complete else self

    @property
    def is_difference_type(self) -> bool:
        """True when every strict-upper weight vanishes, so each row is a
        plain iterated forward difference."""
        return all(v == 0 for row in self.w for v in row[:-1])

    def symbol(self) -> LaurentMatrix:
        """(d+1)x(d+1) Laurent matrix: u = z^-1 - 1 on the diagonal (the last
        diagonal entry is 1 for the incomplete variant), constants above."""
        d = self.d
        u = delta_symbol(1)
        zero = LaurentPoly.zero()
        rows = []
        for i in range(d + 1):
            row = []
            for k in range(d + 1):
                if k < i:
                    row.append(zero)
                elif k == i:
                    if i == d and not self.complete:
                        row.append(LaurentPoly.one())
                    else:
                        row.append(u)
                else:
                    row.append(LaurentPoly.constant(self.constant_entry(i, k)))
            rows.append(row)
        return LaurentMatrix(rows)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "complete": self.complete,
            "w": [[rat_to_str(v) for v in row] for row in self.w],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "TaylorOperator":
        op = cls(
            tuple(tuple(rat_from_str(v) for v in row) for row in obj["w"]),
            bool(obj.get("complete", True)),
        )
        if op.d != int(obj["d"]):
            raise InvalidOperator("declared d does not match the weight table")
        return op


def delta_operator(d: int) -> TaylorOperator:
    """All strict-upper weights zero: rows are iterated forward differences."""
    return TaylorOperator(tuple(tuple(Fraction(int(m == j)) for m in range(1, j + 1)) for j in range(1, d + 1)))


def classical_operator(d: int) -> TaylorOperator:
    """w_{k,m} = 1/(k-m+1)!, the Taylor-remainder weights."""
    return TaylorOperator(
        tuple(tuple(Fraction(1, factorial(j - m + 1)) for m in range(1, j + 1)) for j in range(1, d + 1))
    )


def allones_operator(d: int) -> TaylorOperator:
    """Every weight 1; annihilates the difference vectors of spline schemes."""
    return TaylorOperator(tuple(tuple(Fraction(1) for _ in range(j)) for j in range(1, d + 1)))


def padded_rows(v: PolyVec, ambient: int) -> list[Poly]:
    """Degree-descending polynomial rows of v, zero-padded to ambient+1 rows."""
    if ambient < v.d:
        raise ValueError("ambient dimension smaller than the vector's own")
    rows = [v.components[v.d - i] for i in range(v.d + 1)]
    rows.extend(Poly.zero() for _ in range(ambient - v.d))
    return rows


def apply_operator_polys(op: TaylorOperator, rows: Sequence[Poly]) -> list[Poly]:
    """Apply the operator to a column of polynomial sequences."""
    d = op.d
    if len(rows) != d + 1:
        raise ValueError(f"expected {d + 1} rows, got {len(rows)}")
    out = []
    for i in range(d + 1):
        if i == d and not op.complete:
            out.append(rows[d])
            continue
        acc = rows[i].forward_difference()
        for k in range(i + 1, d + 1):
            wv = op.w[k - 1][i]
            if wv:
                acc = acc - rows[k] * wv
        out.append(acc)
    return out


def apply_operator(
    op: TaylorOperator, values: Sequence[Sequence[RationalLike]], start: int
) -> tuple[list[tuple], int]:
    """Apply the operator to sampled columns on an integer window.

    values[n] is the column at alpha = start + n. The output loses the last
    point (the forward difference looks one step ahead).
    """
    d = op.d
    if len(values) < 2:
        raise WindowTooSmall("need at least two samples for a forward difference")
    for col in values:
        if len(col) != d + 1:
            raise ValueError(f"expected columns of height {d + 1}")
    out = []
    for n in range(len(values) - 1):
        here = values[n]
        ahead = values[n + 1]
        col = []
        for i in range(d + 1):
            if i == d and not op.complete:
                col.append(here[d])
                continue
            acc = ahead[i] - here[i]
            for k in range(i + 1, d + 1):
                wv = op.w[k - 1][i]
                if wv:
                    acc = acc - wv * here[k]
            col.append(acc)
        out.append(tuple(col))
    return out, start


def annihilator(v: PolyVec) -> TaylorOperator:
    """The unique complete operator of size d+1 annihilating v's rows.

    Row i of the result must kill the degree-(d-i) component: expanding each
    forward difference Delta v_m in the basis {v_0, ..., v_{m-1}} yields the
    weights, one column position at a time.
    """
    d = v.d
    w: list[list[Fraction]] = [[Fraction(0)] * j for j in range(1, d + 1)]
    for m in range(1, d + 1):
        q = v.components[m].forward_difference()
        for t in range(m - 1, -1, -1):
            lam = q.coeff(t) * factorial(t)
            if lam:
                q = q - v.components[t] * lam
            # Delta v_m = sum_t lambda_t v_t translates to w_{d-t, d-m+1}.
            w[d - t - 1][d - m] = lam
        if q:
            raise NotInVd("difference expansion left a nonzero remainder")
    return TaylorOperator(tuple(tuple(row) for row in w))


@dataclass(frozen=True)
class Chain:
    """A compatible tower v_0, ..., v_d with v_j in V_j.

    Compatibility means each annihilator nests into the next: the operator
    killing v_{j+1} restricts, on its leading block, to the one killing v_j.
    """

    vecs: tuple[PolyVec, ...]

    def __post_init__(self):
        object.__setattr__(self, "vecs", tuple(self.vecs))

    @property
    def d(self) -> int:
        return len(self.vecs) - 1

    @property
    def last(self) -> PolyVec:
        return self.vecs[-1]

    def operator(self) -> TaylorOperator:
        return annihilator(self.vecs[-1])

    def to_json(self) -> dict:
        return {"d": self.d, "vecs": [v.to_json() for v in self.vecs]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Chain":
        ch = cls(tuple(PolyVec.from_json(v) for v in obj["vecs"]))
        if ch.d != int(obj["d"]):
            raise NotAChain("declared d does not match the number of vectors")
        return ch


def chain_validate(chain: Chain, op: TaylorOperator | None = None) -> None:
    """Raise NotAChain (or NotInVd) unless the tower is compatible; when an
    operator is supplied, additionally require it to be the tower's own."""
    for j, v in enumerate(chain.vecs):
        if v.d != j:
            raise NotAChain(f"vector {j} lives in V_{v.d}, expected V_{j}")
    anns = [annihilator(v) for v in chain.vecs]
    for j in range(chain.d):
        if anns[j].w != anns[j + 1].w[:j]:
            raise NotAChain(f"annihilator of level {j} does not nest into level {j + 1}")
    if op is not None and anns[-1].w != op.w:
        raise NotAChain("chain does not belong to the supplied operator")


def compatibility_vector(chain: Chain, j: int) -> tuple[Fraction, ...]:
    """The weight vector w_{j+1} linking level j to level j+1."""
    if not 0 <= j < chain.d:
        raise IndexError("levels run from 0 to d-1")
    return annihilator(chain.vecs[j + 1]).w[j]


def chain_for(
    op: TaylorOperator, constants: Mapping[tuple[int, int], RationalLike] | None = None
) -> Chain:
    """Build the canonical chain of an operator by exact antidifferencing.

    Level j is grown one degree at a time: the difference of the degree-k
    component is prescribed by the weights, and its antidifference is fixed
    by the free constant constants[(j, k)] (default 0) as the value at 0.
    """
    consts = {k: Fraction(v) for k, v in (constants or {}).items()}
    vecs = []
    for j in range(op.d + 1):
        comps: list[Poly] = [Poly.one()]
        for k in range(1, j + 1):
            rhs = Poly.zero()
            for l in range(k):
                wv = op.w[j - l - 1][j - k]
                if wv:
                    rhs = rhs + comps[l] * wv
            comps.append(antidifference(rhs, consts.get((j, k), 0)))
        vecs.append(PolyVec(tuple(comps)))
    chain = Chain(tuple(vecs))
    chain_validate(chain, op)
    return chain


def chain_with_last(v: PolyVec) -> Chain:
    """The chain whose top vector is v: lower levels come from v's own
    annihilator, then the top is swapped in."""
    op = annihilator(v)
    base = chain_for(op)
    chain = Chain(base.vecs[: v.d] + (v,))
    chain_validate(chain, op)
    return chain
