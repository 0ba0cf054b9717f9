from fractions import Fraction

import pytest

from lopact import (
    GroupSpec,
    NotLopsidedError,
    Positivity,
    RingElement,
    RingMatrix,
    classify_positive,
    contraction_ratio,
    decompose,
    normalize,
    normalized_decomposition,
    symbol_alphabet,
)

F = GroupSpec.free("a", "b")


def test_worked_f_flags(worked_f):
    d = decompose(worked_f)
    assert d.row_lopsided and not d.column_lopsided
    assert d.m_coeffs == (7, -10)
    assert d.m_abs == (7, 10)
    assert d.row_sums() == (6, 8)
    assert d.column_sums() == (7, 7)


def test_worked_h_flags(worked_h):
    d = decompose(worked_h)
    assert d.row_lopsided and d.column_lopsided
    assert d.m_abs == (8, 10)


def test_alphabets(worked_f, worked_h):
    sf = symbol_alphabet(decompose(worked_f))
    assert sf.sizes == (7, 10)
    assert sf.count() == 70
    assert symbol_alphabet(decompose(worked_h)).sizes == (8, 10)


def test_positivity(worked_f, worked_h, word_order):
    row, col = classify_positive(decompose(worked_f), word_order)
    assert (row, col) == (Positivity.YES, Positivity.NO)
    row, col = classify_positive(decompose(worked_h), word_order)
    assert (row, col) == (Positivity.YES, Positivity.YES)


def test_positivity_certificate_attached(worked_f, word_order):
    d = decompose(worked_f)
    classify_positive(d, word_order)
    assert d.row_certificate is not None
    assert d.column_certificate is None


def test_normalize_worked_h(worked_h):
    dn = normalized_decomposition(decompose(worked_h))
    assert dn.is_normalized
    assert dn.m_coeffs == (8, 10)
    a, b = F.generator("a"), F.generator("b")
    m = lambda c, el: RingElement.monomial(F, c, el)
    e = F.identity()
    assert dn.f == RingMatrix(F, (
        (m(8, e) + m(-2, a**3 * b**2), m(-3, a) + m(-1, b**7 * a)),
        (m(5, b**2 * a**4), m(10, e) + m(3, a**8)),
    ))


def test_normalize_preserves_structure(worked_h):
    d = decompose(worked_h)
    dn = normalized_decomposition(d)
    assert dn.m_abs == d.m_abs
    assert dn.f.norm_row() == worked_h.norm_row()
    assert dn.f.norm_column() == worked_h.norm_column()
    assert dn.row_sums() == d.row_sums()
    assert dn.column_sums() == d.column_sums()


def test_normalize_is_idempotent(worked_h):
    dn = normalized_decomposition(decompose(worked_h))
    assert normalize(dn) == dn.f


def test_contraction_ratios(worked_h):
    dn = normalized_decomposition(decompose(worked_h))
    assert contraction_ratio(dn, "column") == Fraction(7, 8)
    assert contraction_ratio(dn, "row") == Fraction(4, 5)


def test_carry_ratios(carry):
    assert carry.row_lopsided and carry.column_lopsided
    assert contraction_ratio(carry, "row") == Fraction(1, 3)
    assert contraction_ratio(carry, "column") == Fraction(1, 3)


def test_not_lopsided_flags_and_inversion_gate():
    from lopact import truncated_inverse

    m = lambda c, el: RingElement.monomial(F, c, el)
    a = F.generator("a")
    e = F.identity()
    d = decompose(RingMatrix(F, ((m(1, e) + m(1, a),),)))
    assert not d.row_lopsided and not d.column_lopsided
    with pytest.raises(NotLopsidedError):
        truncated_inverse(d, Fraction(1, 2), "row")


def test_zero_diagonal_has_no_candidate():
    from lopact import NoCandidateError

    z = RingElement.zero(F)
    with pytest.raises(NoCandidateError):
        decompose(RingMatrix(F, ((z,),)))


def test_diagonal_only_matrix():
    m = lambda c: RingElement.monomial(F, c, F.identity())
    d = decompose(RingMatrix.diagonal((m(2), m(-5))))
    assert d.row_lopsided and d.column_lopsided
    assert d.g.is_zero
    assert d.row_sums() == (0, 0)


def test_strictness_of_inequality():
    # mass equal to the diagonal weight must not count as lopsided
    m = lambda c, el: RingElement.monomial(F, c, el)
    a = F.generator("a")
    e = F.identity()
    tied = decompose(RingMatrix(F, ((m(2, e) + m(2, a),),)))
    assert not tied.row_lopsided and not tied.column_lopsided
