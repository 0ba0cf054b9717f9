"""Shared fixtures: the two worked free-group matrices and the 3 - t system."""
from fractions import Fraction

import pytest

from lopact import (
    GroupSpec,
    RingElement,
    RingMatrix,
    SemigroupOrder,
    decompose,
    normalized_decomposition,
    truncated_inverse,
)


@pytest.fixture(scope="session")
def free_ab():
    return GroupSpec.free("a", "b")


@pytest.fixture(scope="session")
def worked_f(free_ab):
    """Row-lopsided 2x2: ties on the second column keep it one-sided."""
    a, b = free_ab.generator("a"), free_ab.generator("b")
    m = lambda c, el: RingElement.monomial(free_ab, c, el)
    e = free_ab.identity()
    return RingMatrix(free_ab, (
        (m(7, e) + m(-2, a**3 * b**2), m(3, a) + m(1, b**7 * a)),
        (m(5, b**2 * a**4), m(-10, e) + m(-3, a**8)),
    ))


@pytest.fixture(scope="session")
def worked_h(free_ab):
    """Unit-twisted variant of worked_f; lopsided on both sides."""
    a, b = free_ab.generator("a"), free_ab.generator("b")
    m = lambda c, el: RingElement.monomial(free_ab, c, el)
    return RingMatrix(free_ab, (
        (m(8, a**-1) + m(-2, a**3 * b**2 * a**-1), m(3, a * b) + m(1, b**7 * a * b)),
        (m(5, b**2 * a**3), m(-10, b) + m(-3, a**8 * b)),
    ))


@pytest.fixture(scope="session")
def word_order(free_ab):
    a, b = free_ab.generator("a"), free_ab.generator("b")
    return SemigroupOrder(free_ab, (a, b))


@pytest.fixture(scope="session")
def zline():
    return GroupSpec.free_abelian(1)


@pytest.fixture(scope="session")
def three_minus_t(zline):
    t = zline.generator("t")
    e = zline.identity()
    m = lambda c, el: RingElement.monomial(zline, c, el)
    return RingMatrix(zline, ((m(3, e) + m(-1, t),),))


@pytest.fixture(scope="session")
def carry(three_minus_t):
    """Decomposition of 3 - t; already normalized."""
    return normalized_decomposition(decompose(three_minus_t))


@pytest.fixture(scope="session")
def carry_inverse(carry):
    """Column certificate at eps 1/1000: depth 5, tail exactly 1/1458."""
    return truncated_inverse(carry, Fraction(1, 1000), "column", prune_threshold=0)


@pytest.fixture(scope="session")
def carry_row_inverse(carry):
    return truncated_inverse(carry, Fraction(1, 1000), "row", prune_threshold=0)
