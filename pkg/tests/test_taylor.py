"""Generalized Taylor operators: construction, annihilators, chains."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermiteforge import (
    InvalidOperator,
    NotAChain,
    NotInVd,
    Poly,
    PolyVec,
    TaylorOperator,
    allones_operator,
    annihilator,
    apply_operator,
    apply_operator_polys,
    chain_for,
    chain_validate,
    chain_with_last,
    classical_operator,
    classical_vector,
    delta_operator,
    newton_vector,
    padded_rows,
)

rationals = st.fractions(min_value=F(-6), max_value=F(6), max_denominator=6)


@st.composite
def operators(draw, max_d=6):
    d = draw(st.integers(min_value=1, max_value=max_d))
    w = []
    for j in range(1, d + 1):
        row = [draw(rationals) for _ in range(j - 1)] + [F(1)]
        w.append(tuple(row))
    return TaylorOperator(w=tuple(w), complete=True)


def _fact(j):
    out = 1
    for i in range(1, j + 1):
        out *= i
    return out


def test_classical_weights():
    op = classical_operator(4)
    for k in range(1, 5):
        for m in range(1, k + 1):
            assert op.w[k - 1][m - 1] == F(1, _fact(k - m + 1))


def test_delta_weights():
    op = delta_operator(4)
    for k in range(1, 5):
        assert op.w[k - 1] == tuple([F(0)] * (k - 1) + [F(1)])
    assert op.is_difference_type
    assert not classical_operator(4).is_difference_type


def test_allones_weights():
    op = allones_operator(3)
    assert all(all(x == 1 for x in row) for row in op.w)


def test_constant_entries_mirror_weights():
    op = classical_operator(3)
    for k in range(1, 4):
        for i in range(k):
            assert op.constant_entry(i, k) == -op.w[k - 1][i]


def test_rejects_nonunit_diagonal():
    with pytest.raises(InvalidOperator):
        TaylorOperator(w=((F(2),),), complete=True)


def test_rejects_ragged_rows():
    with pytest.raises(InvalidOperator):
        TaylorOperator(w=((F(1),), (F(1), F(1), F(1))), complete=True)


def test_symbol_diagonal():
    comp = delta_operator(2).symbol()
    delta = {-1: F(1), 0: F(-1)}
    for i in range(3):
        assert dict(comp.rows[i][i].items()) == delta
    inc = delta_operator(2).as_incomplete().symbol()
    assert dict(inc.rows[2][2].items()) == {0: F(1)}
    assert dict(inc.rows[1][1].items()) == delta


def test_complete_incomplete_roundtrip():
    op = classical_operator(3)
    assert op.as_incomplete().as_complete() == op
    assert op.as_incomplete().complete is False


def test_chain_for_delta_gives_newton_vectors():
    ch = chain_for(delta_operator(3))
    for j, v in enumerate(ch.vecs):
        assert v == newton_vector(j)


def test_chain_for_classical_gives_monomial_vectors():
    ch = chain_for(classical_operator(3))
    for j, v in enumerate(ch.vecs):
        assert v == classical_vector(j)


def test_chain_constants_shift_free_terms():
    op = delta_operator(2)
    plain = chain_for(op)
    bumped = chain_for(op, constants={(2, 1): F(7)})
    chain_validate(bumped, op)
    assert bumped.vecs[2] != plain.vecs[2]
    assert bumped.vecs[2].component(1).evaluate(0) == 7
    assert bumped.vecs[1] == plain.vecs[1]


@given(operators())
@settings(max_examples=60, deadline=None)
def test_annihilator_recovers_operator(op):
    ch = chain_for(op)
    assert annihilator(ch.last) == op


@given(operators(max_d=4))
@settings(max_examples=40, deadline=None)
def test_operator_annihilates_its_chain(op):
    ch = chain_for(op)
    d = op.d
    rows = padded_rows(ch.last, d)
    out = apply_operator_polys(op, rows)
    assert all(p == Poly() for p in out)


def test_vector_membership_enforced_at_construction():
    # degree-1 component with leading coefficient 2 instead of 1
    with pytest.raises(NotInVd):
        PolyVec((Poly((F(1),)), Poly((F(0), F(2)))))
    # constant component must be exactly 1
    with pytest.raises(NotInVd):
        PolyVec((Poly((F(3),)), Poly((F(0), F(1)))))


def test_chain_validate_detects_mismatch():
    from hermiteforge import Chain

    # levels 0..2 carry Newton weights, level 3 carries classical ones;
    # the level-2 annihilator then fails to nest into level 3
    bad = Chain(
        (
            newton_vector(0),
            newton_vector(1),
            newton_vector(2),
            classical_vector(3),
        )
    )
    with pytest.raises(NotAChain):
        chain_validate(bad)


def test_chain_validate_checks_ownership():
    ch = chain_for(delta_operator(2))
    with pytest.raises(NotAChain):
        chain_validate(ch, classical_operator(2))


def test_chain_with_last_builds_valid_chain():
    v = chain_for(classical_operator(3)).last
    ch = chain_with_last(v)
    chain_validate(ch)
    assert ch.last == v
    assert ch.d == 3


def test_sub_operator_truncates():
    op = classical_operator(4)
    sub = op.sub_operator(2)
    assert sub.d == 2
    assert sub.w == op.w[:2]


def test_apply_operator_kills_newton_samples():
    # integer samples of (value, derivative-like) rows for the chain tail
    op = delta_operator(1)
    v = newton_vector(1)
    start = -3
    values = [
        [v.component(1).evaluate(a), v.component(0).evaluate(a)]
        for a in range(start, start + 8)
    ]
    out, _ = apply_operator(op, values, start)
    assert all(all(x == 0 for x in row) for row in out)
