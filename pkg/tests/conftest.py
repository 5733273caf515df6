from fractions import Fraction as F

import pytest

from hermiteforge import LaurentPoly, delta_operator, synthesize


def seed_poly():
    # (z + 1) / 2
    return LaurentPoly({0: F(1, 2), 1: F(1, 2)})


@pytest.fixture(scope="session")
def ref2():
    """The degree-2 reference scheme used throughout: delta operator,
    seed (z+1)/2, g table {(1,0): 1}."""
    g = {(1, 0): LaurentPoly({0: F(1)})}
    return synthesize(delta_operator(2), seed_poly(), g)


@pytest.fixture(scope="session")
def zero_g():
    """Zero-g schemes for d = 1, 2, 3 keyed by d."""
    return {d: synthesize(delta_operator(d), seed_poly()) for d in (1, 2, 3)}
