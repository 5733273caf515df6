"""Matrix subdivision masks, their symbols, and exact refinement steps.

A mask A assigns a (d+1)x(d+1) rational matrix to finitely many integers.
The scheme maps a column sequence c to (S_A c)(alpha) = sum_beta
A(alpha - 2 beta) c(beta); its symbol is A*(z) = sum_alpha A(alpha) z^alpha,
and on symbols the rule reads (S_A c)*(z) = A*(z) c*(z^2).

Hermite refinement renormalizes derivative rows between levels:
f_{n+1} = D^{-(n+1)} S_A (D^n f_n) with D = diag(1, 1/2, ..., 2^-d).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exactalg import LaurentMatrix, LaurentPoly, RationalLike, rat_from_str, rat_to_str
from .polybasis import PolyVec
from .taylor import WindowTooSmall

Matrix = tuple[tuple[Fraction, ...], ...]


def _as_matrix(rows: Sequence[Sequence[RationalLike]]) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def _is_zero_matrix(m: Matrix) -> bool:
    return all(v == 0 for row in m for v in row)


@dataclass(frozen=True)
class Mask:
    """Finitely supported matrix mask, normalized to a tight support window.

    coeffs[n] is the matrix at alpha = support_min + n.
    """

    support_min: int
    coeffs: tuple[Matrix, ...]

    def __post_init__(self):
        mats = [_as_matrix(m) for m in self.coeffs]
        if not mats:
            raise ValueError("empty mask")
        size = len(mats[0])
        for m in mats:
            if len(m) != size or any(len(r) != size for r in m):
                raise ValueError("mask matrices must be square and equally sized")
        smin = self.support_min
        while mats and _is_zero_matrix(mats[-1]):
            mats.pop()
        while mats and _is_zero_matrix(mats[0]):
            mats.pop(0)
            smin += 1
        if not mats:
            raise ValueError("mask is identically zero")
        object.__setattr__(self, "support_min", smin)
        object.__setattr__(self, "coeffs", tuple(mats))

    @property
    def d(self) -> int:
        return len(self.coeffs[0]) - 1

    @property
    def support(self) -> tuple[int, int]:
        return (self.support_min, self.support_min + len(self.coeffs) - 1)

    def matrix(self, alpha: int) -> Matrix:
        n = alpha - self.support_min
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        size = self.d + 1
        zero = Fraction(0)
        return tuple(tuple(zero for _ in range(size)) for _ in range(size))

    def entry_symbol(self, i: int, k: int) -> LaurentPoly:
        return LaurentPoly(
            {self.support_min + n: m[i][k] for n, m in enumerate(self.coeffs) if m[i][k]}
        )

    def symbol(self) -> LaurentMatrix:
        size = self.d + 1
        return LaurentMatrix(
            [[self.entry_symbol(i, k) for k in range(size)] for i in range(size)]
        )

    @classmethod
    def from_symbol(cls, sym: LaurentMatrix) -> "Mask":
        if sym.nrows != sym.ncols:
            raise ValueError("symbol must be square")
        exps: set[int] = set()
        for row in sym.rows:
            for f in row:
                exps.update(f.support)
        if not exps:
            raise ValueError("zero symbol has no mask")
        lo, hi = min(exps), max(exps)
        coeffs = []
        for alpha in range(lo, hi + 1):
            coeffs.append(
                tuple(
                    tuple(sym[i][k].coeff(alpha) for k in range(sym.ncols))
                    for i in range(sym.nrows)
                )
            )
        return cls(lo, tuple(coeffs))

    def scale(self, v: RationalLike) -> "Mask":
        v = Fraction(v)
        return Mask(
            self.support_min,
            tuple(tuple(tuple(x * v for x in row) for row in m) for m in self.coeffs),
        )

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "support_min": self.support_min,
            "coeffs": [[[rat_to_str(x) for x in row] for row in m] for m in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Mask":
        mask = cls(
            int(obj["support_min"]),
            tuple(
                tuple(tuple(rat_from_str(x) for x in row) for row in m) for m in obj["coeffs"]
            ),
        )
        if mask.d != int(obj["d"]):
            raise ValueError("declared d does not match the matrices")
        return mask


def subdivide(
    mask: Mask, values: Sequence[Sequence], start: int
) -> tuple[list[tuple], int]:
    """One exact subdivision step on a finite window.

    values[n] is the column at beta = start + n. Only output positions whose
    full stencil lies inside the window are returned; the new window is
    [2a + s_max - 1, 2b + s_min + 1] for input [a, b] and support
    [s_min, s_max].
    """
    size = mask.d + 1
    for col in values:
        if len(col) != size:
            raise ValueError(f"expected columns of height {size}")
    a = start
    b = start + len(values) - 1
    s_min, s_max = mask.support
    out_lo = 2 * a + s_max - 1
    out_hi = 2 * b + s_min + 1
    if out_hi < out_lo:
        raise WindowTooSmall(
            f"window [{a},{b}] too small for support [{s_min},{s_max}]"
        )
    out = []
    for alpha in range(out_lo, out_hi + 1):
        beta_lo = -((s_max - alpha) // 2)  # ceil((alpha - s_max) / 2)
        beta_hi = (alpha - s_min) // 2
        acc = [0] * size
        for beta in range(max(beta_lo, a), min(beta_hi, b) + 1):
            m = mask.matrix(alpha - 2 * beta)
            col = values[beta - a]
            for i in range(size):
                mi = m[i]
                s = acc[i]
                for k in range(size):
                    if mi[k]:
                        s += mi[k] * col[k]
                acc[i] = s
        out.append(tuple(acc))
    return out, out_lo


def hermite_step(
    mask: Mask, values: Sequence[Sequence], start: int, level: int
) -> tuple[list[tuple], int]:
    """Refine level-n Hermite data to level n+1 with derivative rescaling.

    Works for exact (Fraction) and floating data alike; the rescaling factors
    stay exact either way.
    """
    size = mask.d + 1
    pre = [
        tuple(col[k] * Fraction(1, 2**(level * k)) for k in range(size)) for col in values
    ]
    mid, out_start = subdivide(mask, pre, start)
    post = [
        tuple(col[k] * Fraction(2**((level + 1) * k)) for k in range(size)) for col in mid
    ]
    return post, out_start


def polyvec_applied(
    mask: Mask, v: PolyVec, window: tuple[int, int] | None = None
) -> tuple[list[tuple[Fraction, ...]], int]:
    """Exact samples of S_A applied to the zero-padded vector of v.

    The default window is wide enough that, per parity class, the output
    determines its (componentwise) polynomial of degree <= d.
    """
    d = mask.d
    if v.d > d:
        raise ValueError("vector does not fit the mask's dimension")
    if window is None:
        s_min, s_max = mask.support
        half = d + 3 + (s_max - s_min)
        window = (-half, half)
    a, b = window
    cols = [v.column_at(beta, ambient=d) for beta in range(a, b + 1)]
    return subdivide(mask, cols, a)


def eigen_check(
    mask: Mask, v: PolyVec, eigenvalue: RationalLike
) -> tuple[int, int, Fraction, Fraction] | None:
    """Test S_A v-hat = lambda v-hat exactly.

    Checking every integer in a conclusive window per parity class settles
    the polynomial identity. Returns None on success, else the first
    counterexample (alpha, row, got, want).
    """
    lam = Fraction(eigenvalue)
    out, out_start = polyvec_applied(mask, v)
    d = mask.d
    for n, col in enumerate(out):
        alpha = out_start + n
        want = v.column_at(alpha, ambient=d)
        for i in range(d + 1):
            if col[i] != lam * want[i]:
                return (alpha, i, col[i], lam * want[i])
    return None


@dataclass(frozen=True)
class DyadicGrid:
    """Hermite data sampled on the dyadic grid 2^-level * (start + n).

    values[n] is the column (f, f', ..., f^(d)) at that abscissa; entries are
    Fractions in exact mode or floats in numeric mode.
    """

    level: int
    start: int
    values: tuple[tuple, ...]

    @property
    def d(self) -> int:
        return len(self.values[0]) - 1

    @property
    def npoints(self) -> int:
        return len(self.values)

    def x(self, n: int) -> float:
        return (self.start + n) / 2**self.level

    def x_exact(self, n: int) -> Fraction:
        return Fraction(self.start + n, 2**self.level)

    @property
    def is_exact(self) -> bool:
        return bool(self.values) and isinstance(self.values[0][0], Fraction)

    def to_csv(self) -> str:
        header = "x," + ",".join(f"f{k}" for k in range(self.d + 1))
        lines = [header]
        for n, col in enumerate(self.values):
            xs = f"{self.x(n):.17g}"
            lines.append(xs + "," + ",".join(f"{float(v):.17g}" for v in col))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        if self.is_exact:
            vals = [[rat_to_str(v) for v in col] for col in self.values]
            kind = "exact"
        else:
            vals = [[f"{float(v):.17g}" for v in col] for col in self.values]
            kind = "float"
        return {
            "level": self.level,
            "start": self.start,
            "kind": kind,
            "values": vals,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "DyadicGrid":
        kind = obj.get("kind", "exact")
        if kind == "exact":
            vals = tuple(tuple(rat_from_str(v) for v in col) for col in obj["values"])
        else:
            vals = tuple(tuple(float(v) for v in col) for col in obj["values"])
        return cls(int(obj["level"]), int(obj["start"]), vals)


def load_mask(path: str) -> Mask:
    with open(path, "r", encoding="utf-8") as fh:
        return Mask.from_json(json.load(fh))
