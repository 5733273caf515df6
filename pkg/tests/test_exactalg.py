"""Ring laws and exact division for the Laurent polynomial layer.

The multiplication cross-check against sympy is the only place the test
suite leans on an external CAS; everything downstream trusts this layer.
"""

from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hermiteforge import (
    LaurentMatrix,
    LaurentPoly,
    NotDivisible,
    Poly,
    delta_symbol,
    lm_triangular_inverse,
    triangular_inverse_check,
)

rationals = st.fractions(
    min_value=F(-20), max_value=F(20), max_denominator=12
)


@st.composite
def laurent_polys(draw, min_exp=-5, max_exp=5, max_terms=6):
    n = draw(st.integers(min_value=0, max_value=max_terms))
    exps = draw(
        st.lists(
            st.integers(min_value=min_exp, max_value=max_exp),
            min_size=n,
            max_size=n,
            unique=True,
        )
    )
    coeffs = draw(st.lists(rationals, min_size=n, max_size=n))
    return LaurentPoly(dict(zip(exps, coeffs)))


def to_sympy(p, z):
    return sum(sympy.Rational(c.numerator, c.denominator) * z**e for e, c in p.items())


@given(laurent_polys(), laurent_polys())
@settings(max_examples=60, deadline=None)
def test_product_matches_sympy(p, q):
    z = sympy.Symbol("z")
    got = to_sympy(p * q, z)
    want = sympy.expand(to_sympy(p, z) * to_sympy(q, z))
    assert sympy.simplify(got - want) == 0


@given(laurent_polys(), laurent_polys(), laurent_polys())
@settings(max_examples=40, deadline=None)
def test_ring_laws(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p + (-p) == LaurentPoly()
    assert p - q == p + (-q)


@given(laurent_polys(), laurent_polys())
@settings(max_examples=60, deadline=None)
def test_divide_exact_roundtrip(p, q):
    if q.is_zero:
        return
    prod = p * q
    assert prod.divide_exact(q) == p


def test_divide_exact_rejects_inexact():
    p = LaurentPoly({0: F(1), 1: F(1)})  # 1 + z
    q = LaurentPoly({0: F(-1), 1: F(1)})  # z - 1
    with pytest.raises(NotDivisible):
        p.divide_exact(q)


@given(laurent_polys(), st.integers(min_value=1, max_value=3))
@settings(max_examples=30, deadline=None)
def test_substitute_power(p, m):
    q = p.substitute_power(m)
    for e, c in p.items():
        assert q.coeff(m * e) == c
    assert sum(1 for _, c in q.items() if c) == sum(1 for _, c in p.items() if c)


@given(laurent_polys())
@settings(max_examples=30, deadline=None)
def test_evaluate_consistent_with_items(p):
    x = F(3, 2)
    assert p.evaluate(x) == sum(c * x**e for e, c in p.items())


def test_delta_symbol():
    d = delta_symbol()
    assert dict(d.items()) == {-1: F(1), 0: F(-1)}
    assert d.evaluate(1) == 0


def test_power_and_abs_sum():
    h = LaurentPoly({-1: F(1, 2), 0: F(-1, 2)})
    assert h**2 == h * h
    assert h.abs_coeff_sum() == 1


@given(st.integers(min_value=1, max_value=4), st.data())
@settings(max_examples=25, deadline=None)
def test_triangular_inverse(n, data):
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j < i:
                row.append(LaurentPoly())
            elif j == i:
                row.append(LaurentPoly({-1: F(1), 0: F(-1)}))
            else:
                row.append(data.draw(laurent_polys(min_exp=-2, max_exp=2, max_terms=3)))
        rows.append(row)
    t = LaurentMatrix(rows)
    inv = lm_triangular_inverse(t)
    assert triangular_inverse_check(t, inv)


def test_poly_forward_difference():
    p = Poly((F(0), F(0), F(1)))  # x^2
    dp = p.forward_difference()
    # (x+1)^2 - x^2 = 2x + 1
    assert dp.coeffs == (F(1), F(2))
    assert Poly((F(5),)).forward_difference() == Poly()


@given(st.lists(rationals, min_size=0, max_size=6))
@settings(max_examples=40, deadline=None)
def test_poly_evaluate_horner(coeffs):
    p = Poly(tuple(coeffs))
    x = F(-7, 3)
    assert p.evaluate(x) == sum(c * x**k for k, c in enumerate(coeffs))
