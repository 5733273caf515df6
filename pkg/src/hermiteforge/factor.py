"""Factorizing Hermite masks through Taylor operators, and the reverse path
from a factor back to a mask or even to a full spectral chain.

The central identity is T*(z) A*(z) = scale * B*(z) T*(z^2): applying the
difference operator after refining equals refining differenced data with the
factor scheme B. The complete operator pairs with the factor written B-tilde
in displays; the incomplete variant keeps the top-derivative row undivided.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exactalg import (
    LaurentMatrix,
    LaurentPoly,
    NotDivisible,
    delta_symbol,
    lm_triangular_inverse,
    rat_from_str,
    rat_to_str,
)
from .polybasis import Poly, PolyVec
from .subdivision import Mask, eigen_check, polyvec_applied
from .taylor import Chain, TaylorOperator, chain_for
from .taylor import chain_validate as _chain_validate


class NotAnnihilated(Exception):
    """Raised when data expected to be killed by the difference operator is not."""


class EigenvalueClash(Exception):
    """Raised when the extracted eigenvalues are not the expected distinct
    powers of 1/2."""


class SpanHypothesisFailed(Exception):
    """Raised when S_A does not map the padded chain into its own span."""


@dataclass(frozen=True)
class SpectralFailure:
    level: int
    alpha: int
    row: int
    got: Fraction
    want: Fraction

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "alpha": self.alpha,
            "row": self.row,
            "got": rat_to_str(self.got),
            "want": rat_to_str(self.want),
        }


@dataclass(frozen=True)
class SpectralReport:
    """Outcome of checking S_A v-hat_j = 2^-j v-hat_j across a chain."""

    ok: bool
    d: int
    failures: tuple[SpectralFailure, ...]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "d": self.d,
            "eigenvalues": [rat_to_str(Fraction(1, 2**j)) for j in range(self.d + 1)],
            "failures": [f.to_json() for f in self.failures],
        }


def verify_spectral_chain(mask: Mask, chain: Chain) -> SpectralReport:
    """Check the eigenvector property level by level; exact, conclusive."""
    if chain.d != mask.d:
        raise ValueError("chain and mask dimensions differ")
    failures = []
    for j, v in enumerate(chain.vecs):
        hit = eigen_check(mask, v, Fraction(1, 2**j))
        if hit is not None:
            alpha, row, got, want = hit
            failures.append(SpectralFailure(j, alpha, row, got, want))
    return SpectralReport(ok=not failures, d=chain.d, failures=tuple(failures))


def factor_through(c_mask: Mask, chain: Chain) -> Mask:
    """Solve C* = B* T-tilde*(z^2) for B, column by column.

    Requires S_C to annihilate every padded chain vector; that is exactly
    what makes each column division exact.
    """
    op = chain.operator()
    d = c_mask.d
    if op.d != d or chain.d != d:
        raise ValueError("chain and mask dimensions differ")
    for j, v in enumerate(chain.vecs):
        hit = eigen_check(c_mask, v, 0)
        if hit is not None:
            alpha, row, got, _ = hit
            raise NotAnnihilated(
                f"level {j} is not annihilated: row {row} at alpha={alpha} gives {got}"
            )
    u2 = delta_symbol(2)
    csym = c_mask.symbol()
    size = d + 1
    b: list[list[LaurentPoly]] = [[LaurentPoly.zero()] * size for _ in range(size)]
    for k in range(size):
        for i in range(size):
            num = csym[i][k]
            for l in range(k):
                wv = op.w[k - 1][l]
                if wv:
                    num = num + b[i][l] * wv
            try:
                b[i][k] = num.divide_exact(u2)
            except NotDivisible as exc:
                raise NotDivisible(
                    f"column division failed at entry ({i},{k}): {exc}"
                ) from exc
    bsym = LaurentMatrix(b)
    if csym != bsym * op.as_complete().symbol().substitute_power(2):
        raise AssertionError("column solve did not reproduce the target symbol")
    return Mask.from_symbol(bsym)


@dataclass(frozen=True)
class Factorization:
    """A mask, the Taylor operator it factors through, the factor mask, and
    the scale in T*(z) A*(z) = scale * B*(z) T*(z^2)."""

    mask: Mask
    taylor: TaylorOperator
    factor: Mask
    scale: Fraction

    def verify(self) -> bool:
        t = self.taylor.symbol()
        lhs = t * self.mask.symbol()
        rhs = (self.factor.symbol() * t.substitute_power(2)).scale(
            LaurentPoly.constant(self.scale)
        )
        return lhs == rhs

    def to_json(self) -> dict:
        return {
            "A": self.mask.to_json(),
            "taylor": self.taylor.to_json(),
            "B": self.factor.to_json(),
            "scale": rat_to_str(self.scale),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Factorization":
        return cls(
            mask=Mask.from_json(obj["A"]),
            taylor=TaylorOperator.from_json(obj["taylor"]),
            factor=Mask.from_json(obj["B"]),
            scale=rat_from_str(obj["scale"]),
        )


def taylor_factorize(
    mask: Mask, chain: Chain, scale: Fraction | None = None
) -> Factorization:
    """Factor a mask through the complete operator of a chain.

    The difference scheme C = T-tilde o S_A always annihilates the padded
    chain when the factorization exists, so the gate is the exact
    divisibility in the column solve, not the spectral property itself.
    """
    d = mask.d
    if scale is None:
        scale = Fraction(1, 2**d)
    op = chain.operator().as_complete()
    csym = op.symbol() * mask.symbol()
    c_mask = Mask.from_symbol(csym)
    b_raw = factor_through(c_mask, chain)
    fac = Factorization(mask=mask, taylor=op, factor=b_raw.scale(1 / scale), scale=scale)
    if not fac.verify():
        raise AssertionError("factorization identity failed after the column solve")
    return fac


def unfactor(
    op: TaylorOperator, factor: Mask, scale: Fraction | None = None
) -> Mask:
    """Recover the mask A from its factor: A* = scale * (T-tilde*)^-1 B* T-tilde*(z^2).

    All divisions are exact Laurent divisions; a failure names the first
    entry whose divisibility condition breaks.
    """
    op = op.as_complete()
    d = op.d
    if factor.d != d:
        raise ValueError("operator and factor dimensions differ")
    if scale is None:
        scale = Fraction(1, 2**d)
    u = delta_symbol(1)
    u2 = delta_symbol(2)
    bsym = factor.symbol()
    size = d + 1
    # g = B* T-tilde*(z^2), written entrywise to keep the divisions visible.
    e: list[list[LaurentPoly]] = [[LaurentPoly.zero()] * size for _ in range(size)]
    for l in range(size):
        for k in range(size):
            g = bsym[l][k] * u2
            for r in range(k):
                wv = op.w[k - 1][r]
                if wv:
                    g = g - bsym[l][r] * wv
            if g.is_zero:
                continue
            try:
                e[l][k] = g.divide_exact(u ** (l + 1))
            except NotDivisible as exc:
                raise NotDivisible(
                    f"divisibility condition failed at entry ({l},{k}): "
                    f"row {l} requires a factor (z^-1 - 1)^{l + 1}"
                ) from exc
    inv = lm_triangular_inverse(op.symbol())
    rows = []
    for j in range(size):
        row = []
        for k in range(size):
            acc = LaurentPoly.zero()
            for l in range(j, size):
                p = inv.p[j][l]
                if p and e[l][k]:
                    acc = acc + p * e[l][k]
            row.append(acc * u**j * scale)
        rows.append(row)
    asym = LaurentMatrix(rows)
    mask = Mask.from_symbol(asym)
    tsym = op.symbol()
    if tsym * asym != (bsym * tsym.substitute_power(2)).scale(LaurentPoly.constant(scale)):
        raise AssertionError("unfactor did not satisfy the factorization identity")
    return mask


def complete_from_incomplete(b: Mask) -> Mask:
    """Translate the incomplete-operator factor B into the complete one.

    Defining identity: diag(I, z^-1 - 1) B*(z) = B-tilde*(z) diag(I, z^-2 - 1),
    so the last column picks up a 1/(z^-2 - 1) and the last row a (z^-1 - 1),
    which cancel to (z^-1 + 1)^-1 on the corner.
    """
    d = b.d
    u = delta_symbol(1)
    u2 = delta_symbol(2)
    zp1 = LaurentPoly({-1: 1, 0: 1})  # z^-1 + 1
    sym = b.symbol()
    rows = []
    for i in range(d + 1):
        row = []
        for k in range(d + 1):
            f = sym[i][k]
            if i < d and k < d:
                row.append(f)
            elif i < d and k == d:
                row.append(f.divide_exact(u2) if f else f)
            elif i == d and k < d:
                row.append(f * u)
            else:
                row.append(f.divide_exact(zp1) if f else f)
        rows.append(row)
    return Mask.from_symbol(LaurentMatrix(rows))


def incomplete_from_complete(btilde: Mask) -> Mask:
    """Translate the complete-operator factor B-tilde into the incomplete one.

    Requires every bottom-row entry left of the corner to vanish at z = 1
    (so the division by z^-1 - 1 is exact)."""
    d = btilde.d
    u = delta_symbol(1)
    u2 = delta_symbol(2)
    zp1 = LaurentPoly({-1: 1, 0: 1})
    sym = btilde.symbol()
    rows = []
    for i in range(d + 1):
        row = []
        for k in range(d + 1):
            f = sym[i][k]
            if i < d and k < d:
                row.append(f)
            elif i < d and k == d:
                row.append(f * u2)
            elif i == d and k < d:
                try:
                    row.append(f.divide_exact(u) if f else f)
                except NotDivisible as exc:
                    raise NotDivisible(
                        f"bottom-row entry ({i},{k}) does not vanish at z = 1"
                    ) from exc
            else:
                row.append(f * zp1)
        rows.append(row)
    return Mask.from_symbol(LaurentMatrix(rows))


def _last_column_partition_of_unity(mask: Mask) -> bool:
    """S_B e_d = e_d: per parity, the last columns must sum to e_d."""
    d = mask.d
    s_min, s_max = mask.support
    for parity in (0, 1):
        total = [Fraction(0)] * (d + 1)
        for alpha in range(s_min, s_max + 1):
            if (alpha - parity) % 2 == 0:
                m = mask.matrix(alpha)
                for i in range(d + 1):
                    total[i] += m[i][d]
        if any(total[i] != (1 if i == d else 0) for i in range(d + 1)):
            return False
    return True


def spectral_chain_from_factorization(
    mask: Mask,
    factor_incomplete: Mask,
    op: TaylorOperator,
    chain: Chain | None = None,
    scale: Fraction | None = None,
) -> Chain:
    """Build a spectral chain for the mask out of an incomplete factorization.

    Hypotheses checked exactly: the incomplete identity
    T*(z) A*(z) = scale * B*(z) T*(z^2), the partition property S_B e_d = e_d,
    and that S_A maps each padded chain vector into the span of the lower
    ones. The resulting tower is re-verified before being returned.
    """
    d = mask.d
    if scale is None:
        scale = Fraction(1, 2**d)
    opi = op.as_incomplete()
    if chain is None:
        chain = chain_for(op.as_complete())
    t = opi.symbol()
    lhs = t * mask.symbol()
    rhs = (factor_incomplete.symbol() * t.substitute_power(2)).scale(
        LaurentPoly.constant(scale)
    )
    if lhs != rhs:
        raise ValueError("incomplete factorization identity does not hold")
    if not _last_column_partition_of_unity(factor_incomplete):
        raise ValueError("factor does not reproduce the constant top-derivative data")

    size = d + 1
    samples: list[tuple[list[tuple[Fraction, ...]], int]] = []
    for v in chain.vecs:
        samples.append(polyvec_applied(mask, v))
    umat = [[Fraction(0)] * size for _ in range(size)]
    for j in range(size):
        cols, start = samples[j]
        work = [list(c) for c in cols]
        for k in range(size - 1, -1, -1):
            vals = {work[n][k] for n in range(len(work))}
            if len(vals) != 1:
                raise SpanHypothesisFailed(
                    f"image of level {j} is not constant on row {k}; "
                    "it leaves the span of the chain"
                )
            c = vals.pop()
            if c == 0:
                continue
            if k > j:
                raise SpanHypothesisFailed(
                    f"image of level {j} has a component on level {k}"
                )
            umat[k][j] = c
            for n in range(len(work)):
                col = chain.vecs[k].column_at(start + n, ambient=d)
                for i in range(size):
                    work[n][i] -= c * col[i]
    for j in range(size):
        want = Fraction(1, 2**j)
        if umat[j][j] != want:
            raise EigenvalueClash(
                f"level {j} reproduces itself with factor {umat[j][j]}, expected {want}"
            )
    # Unit upper-triangular change of basis diagonalizing U.
    smat = [[Fraction(0)] * size for _ in range(size)]
    for j in range(size):
        smat[j][j] = Fraction(1)
        lam = Fraction(1, 2**j)
        for i in range(j - 1, -1, -1):
            acc = Fraction(0)
            for m in range(i + 1, j + 1):
                acc += umat[i][m] * smat[m][j]
            smat[i][j] = acc / (lam - umat[i][i])
    vecs = []
    for j in range(size):
        comps = []
        for tdeg in range(j + 1):
            p = Poly.zero()
            for k in range(j - tdeg, j + 1):
                coef = smat[k][j]
                if coef:
                    p = p + chain.vecs[k].components[k - j + tdeg] * coef
            comps.append(p)
        vecs.append(PolyVec(tuple(comps)))
    out = Chain(tuple(vecs))
    _chain_validate(out)
    report = verify_spectral_chain(mask, out)
    if not report.ok:
        raise AssertionError("constructed chain failed the final spectral check")
    return out
