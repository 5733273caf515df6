"""Scheme synthesis: last-row solving, free parameters, strategies."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goldens import H_TABLE, REF2_FACTOR, REF2_MASK, REF2_SCALE, h_closed_forms, mask_from_entries
from hermiteforge import (
    BadSeed,
    LaurentPoly,
    TaylorOperator,
    assemble_factor,
    build_last_row_system,
    classical_operator,
    delta_operator,
    g_table_to_json,
    last_row_symbols,
    parse_g_table,
    recurrence_last_row,
    synthesize,
)

rationals = st.fractions(min_value=F(-4), max_value=F(4), max_denominator=6)


def seed_power(n):
    # ((z+1)/2)^n
    return LaurentPoly({0: F(1, 2), 1: F(1, 2)}) ** n


def family_operator(w21):
    return TaylorOperator(w=((F(1),), (F(w21), F(1))), complete=False)


def test_reference_scheme_frozen(ref2):
    assert ref2.mask.symbol() == mask_from_entries(REF2_MASK, 2).symbol()
    fac = ref2.factorization
    assert fac.scale == REF2_SCALE
    assert fac.factor.symbol() == mask_from_entries(REF2_FACTOR, 2).symbol()
    assert fac.verify()


def test_last_row_moment_table():
    for (w21, n), (h12, h11, h01) in H_TABLE.items():
        res = synthesize(family_operator(w21), seed_power(n))
        row = res.last_row
        assert row[1].derivative_at_one(2) == h12
        assert row[1].derivative_at_one(1) == h11
        assert row[0].derivative_at_one(1) == h01
        assert abs(res.system.determinant) == 1


@given(rationals, st.integers(min_value=1, max_value=6))
@settings(max_examples=30, deadline=None)
def test_last_row_moments_closed_form(w21, n):
    # the closed forms describe the square solve; w21 = 0 would otherwise
    # route to the recurrence, which resolves the freedom differently
    res = synthesize(family_operator(w21), seed_power(n), strategy="system")
    h12, h11, h01 = h_closed_forms(w21, n)
    assert res.last_row[1].derivative_at_one(2) == h12
    assert res.last_row[1].derivative_at_one(1) == h11
    assert res.last_row[0].derivative_at_one(1) == h01


@st.composite
def operators(draw, max_d=5):
    d = draw(st.integers(min_value=1, max_value=max_d))
    w = []
    for j in range(1, d + 1):
        w.append(tuple([draw(rationals) for _ in range(j - 1)] + [F(1)]))
    return TaylorOperator(w=tuple(w), complete=False)


@given(operators())
@settings(max_examples=40, deadline=None)
def test_last_row_system_is_unimodular(op):
    system = build_last_row_system(op, seed_power(1))
    assert abs(system.determinant) == 1
    assert last_row_symbols(system) == synthesize(op, seed_power(1), strategy="system").last_row


def test_auto_strategy_picks_recurrence_for_difference_type(zero_g):
    assert zero_g[2].strategy == "recurrence"
    assert synthesize(classical_operator(2), seed_power(1)).strategy == "system"


def test_both_strategies_satisfy_the_identity():
    seed = seed_power(1)
    rec = synthesize(delta_operator(2), seed, strategy="recurrence")
    sq = synthesize(delta_operator(2), seed, strategy="system")
    assert rec.factorization.verify()
    assert sq.factorization.verify()
    # the recurrence and the square solve are different resolutions of the
    # same underdetermined problem
    assert rec.mask.symbol() != sq.mask.symbol()


def test_recurrence_rejects_nonzero_upper_weights():
    with pytest.raises(ValueError):
        synthesize(classical_operator(2), seed_power(1), strategy="recurrence")


def test_bad_seed_rejected():
    with pytest.raises(BadSeed):
        synthesize(delta_operator(2), LaurentPoly({0: F(1), 1: F(1)}))


def test_free_parameter_lands_in_its_entry(ref2, zero_g):
    diff = ref2.factorization.factor.symbol() - zero_g[2].factorization.factor.symbol()
    bump = LaurentPoly({-2: F(1), -1: F(-2), 0: F(1)})  # (z^-1 - 1)^2
    for i in range(3):
        for k in range(3):
            want = bump if (i, k) == (1, 0) else LaurentPoly()
            assert diff.rows[i][k] == want


def test_free_parameter_outside_lower_triangle_rejected():
    op = delta_operator(2)
    row = recurrence_last_row(op, seed_power(1))
    with pytest.raises(ValueError):
        assemble_factor(op, row, {(0, 1): LaurentPoly({0: F(1)})})


def test_g_table_json_roundtrip():
    g = {(1, 0): LaurentPoly({0: F(1)}), (2, 1): LaurentPoly({-1: F(1, 3), 2: F(-2)})}
    assert parse_g_table(g_table_to_json(g)) == g


def test_masks_have_expected_support(ref2, zero_g):
    assert ref2.mask.support == (-6, 0)
    assert zero_g[1].mask.support == (-4, 0)
    assert zero_g[3].mask.support == (-8, 0)
