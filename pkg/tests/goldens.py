"""Frozen reference values shared by the test modules.

Everything in here was computed once with the library itself and then
checked against independent derivations (sympy cross-checks for the
small cases, hand calculation for the closed forms).  The point of
freezing the numbers is regression safety: any change to the exact
arithmetic that alters one of these dictionaries is a behaviour change,
not a refactor.
"""

from fractions import Fraction as F

from hermiteforge import Mask


def mask_from_entries(entries, d):
    """Build a Mask from a {(row, col, exponent): coefficient} dictionary."""
    lo = min(e for _, _, e in entries)
    hi = max(e for _, _, e in entries)
    coeffs = []
    for off in range(lo, hi + 1):
        coeffs.append(
            tuple(
                tuple(entries.get((i, k, off), F(0)) for k in range(d + 1))
                for i in range(d + 1)
            )
        )
    return Mask(lo, tuple(coeffs))

# ---------------------------------------------------------------------------
# The degree-2 reference scheme: synthesize(delta_operator(2), (z+1)/2,
# g={(1,0): 1}).  Dictionaries map (row, col, exponent) -> coefficient.
# ---------------------------------------------------------------------------

REF2_MASK = {
    (0, 0, -4): F(1, 8),
    (0, 0, -3): F(1, 2),
    (0, 0, -2): F(9, 8),
    (0, 0, -1): F(1, 2),
    (0, 0, 0): F(-1, 4),
    (0, 1, -2): F(1, 16),
    (0, 1, 0): F(-7, 16),
    (0, 2, 0): F(-1, 16),
    (1, 0, -5): F(1, 8),
    (1, 0, -4): F(3, 8),
    (1, 0, -3): F(1, 2),
    (1, 0, -2): F(-1, 2),
    (1, 0, -1): F(-5, 8),
    (1, 0, 0): F(1, 8),
    (1, 1, -3): F(1, 16),
    (1, 1, -2): F(-1, 16),
    (1, 1, -1): F(-5, 16),
    (1, 1, 0): F(5, 16),
    (1, 2, -1): F(-1, 16),
    (1, 2, 0): F(1, 16),
    (2, 0, -6): F(1, 8),
    (2, 0, -5): F(1, 4),
    (2, 0, -4): F(-1, 8),
    (2, 0, -3): F(-1, 2),
    (2, 0, -2): F(-1, 8),
    (2, 0, -1): F(1, 4),
    (2, 0, 0): F(1, 8),
}

# Complete difference factor of the scheme above, T S_A = (1/4) S_B T(.^2).
REF2_FACTOR = {
    (0, 0, -1): F(1, 2),
    (0, 0, 0): F(-1, 2),
    (1, 0, -2): F(1),
    (1, 0, -1): F(-2),
    (1, 0, 0): F(1),
    (1, 1, -2): F(1, 4),
    (1, 1, -1): F(-1, 2),
    (1, 1, 0): F(1, 4),
    (2, 0, -5): F(1, 2),
    (2, 0, -4): F(1, 2),
    (2, 0, -3): F(-1),
    (2, 0, -2): F(-1),
    (2, 0, -1): F(1, 2),
    (2, 0, 0): F(1, 2),
    (2, 1, -3): F(1, 2),
    (2, 1, -2): F(1, 2),
    (2, 1, -1): F(-1, 2),
    (2, 1, 0): F(-1, 2),
    (2, 2, -1): F(1, 2),
    (2, 2, 0): F(1, 2),
}

REF2_SCALE = F(1, 4)

# Spectral chain recovered from the factorization (not the delta chain the
# scheme was built from).  Coefficients ascending by degree.
REF2_SPECTRAL_CHAIN = (
    ((F(1),),),
    ((F(1),), (F(-2), F(1))),
    ((F(1),), (F(-3, 2), F(1)), (F(11, 6), F(-2), F(1, 2))),
)

# Residue-class sup norms of the complete factor, n = 1..6.  The joint norm
# dips below 1 only at n = 6; the per-row diagonal norms are 1/2 already at
# n = 1, which is what certifies contractivity for small n_max.
REF2_FACTOR_NORMS = (F(9, 2), F(17, 4), F(5, 2), F(63, 32), F(139, 128), F(365, 512))

REF2_MASK_SUPPORT = (-6, 0)
REF2_FACTOR_SUPPORT = (-5, 0)

# ---------------------------------------------------------------------------
# Zero-g family: synthesize(delta_operator(d), (z+1)/2) with no g table.
# ---------------------------------------------------------------------------

ZERO_G_MASK_SUPPORT = {1: (-4, 0), 2: (-6, 0), 3: (-8, 0)}

ZERO_G_FACTOR_NORMS = {
    1: (F(3, 2), F(5, 4), F(7, 8)),
    2: (F(7, 2), F(9, 4), F(27, 16), F(31, 32)),
    3: (F(15, 2), F(41, 8), F(229, 64), F(1067, 512), F(5141, 4096), F(22795, 32768)),
}

# ---------------------------------------------------------------------------
# Parametrized d=2 family: operator rows w_1 = (1,), w_2 = (w21, 1), seed
# ((z+1)/2)^n.  The solved last row has readable moments at z = 1:
#   h01 = (d/dz)   entry (2,0) at 1
#   h11 = (d/dz)   entry (2,1) at 1
#   h12 = (d/dz)^2 entry (2,1) at 1
# Closed forms in (w21, n) below; the table lists the four spot checks.
# ---------------------------------------------------------------------------


def h_closed_forms(w21, n):
    h12 = F(n * (n + 1), 2) - 4 * n * w21 + 16 * w21 * w21
    h11 = n + 1 - 4 * w21
    h01 = 2 * n - 8 * w21
    return h12, h11, h01


H_TABLE = {
    (F(1, 2), 1): (F(3), F(0), F(-2)),
    (F(1, 2), 5): (F(9), F(4), F(6)),
    (F(1), 1): (F(13), F(-2), F(-6)),
    (F(1), 5): (F(11), F(2), F(2)),
}

# ---------------------------------------------------------------------------
# Spline factor for r = 4, d = 3: all four rows identical, entry k equal to
# (1-z)^(3-k) (1+z)^(4-k) z^gamma / 2 with gamma = 1 for k = 0 and 3 else.
# ---------------------------------------------------------------------------

SPLINE_R4_D3_ROW = (
    {1: F(1, 2), 2: F(1, 2), 3: F(-3, 2), 4: F(-3, 2),
     5: F(3, 2), 6: F(3, 2), 7: F(-1, 2), 8: F(-1, 2)},
    {3: F(1, 2), 4: F(1, 2), 5: F(-1), 6: F(-1), 7: F(1, 2), 8: F(1, 2)},
    {3: F(1, 2), 4: F(1, 2), 5: F(-1, 2), 6: F(-1, 2)},
    {3: F(1, 2), 4: F(1, 2)},
)

SPLINE_R4_D3_SCALE = F(1, 8)

# ---------------------------------------------------------------------------
# Convergence measurements (floats, frozen as loose upper bounds where the
# quantity is a ratio and as the exact printed value where it is exact).
# Tail ratios of the inter-level sup differences stay below 0.75 for every
# scheme in the suite; the reference scheme's worst final residual is
# 1.0204e-4 at level 8 and shrinks by about a factor 4 per extra level.
# ---------------------------------------------------------------------------

TAIL_RATIO_BOUND = 0.75

REF2_FINAL_RESIDUAL_ROW1 = 1.0204e-4

# reconstruct_limits on the reference scheme, float cascade on [-4,4]:
# anchored trapezoid reconstruction deviates from the cascade's own top row
# by about 3.3 * 2^-n (5.127e-2 at level 6, halving per level).
REF2_RECONSTRUCT_DEV_LEVEL6 = 5.127e-2
