import itertools
from fractions import Fraction

import pytest

from lopact import (
    BOUNDARY_OPEN,
    FULL,
    GroupSpec,
    InsufficientPrecisionError,
    Member,
    NonMember,
    RingElement,
    RingMatrix,
    SymbolMeasure,
    Window,
    WitnessNotLocalizedError,
    adjoint_inverse,
    classify_collision,
    collision_search,
    decide_membership,
    decompose,
    defect_height,
    empirical_fourier,
    empirical_fourier_bound,
    haar_fourier,
    row_mul,
    truncated_inverse,
)

Z = GroupSpec.free_abelian(1)
T = Z.generator("t")
E = Z.identity()


def mono(c, el=E):
    return RingElement.monomial(Z, c, el)


UNIFORM3 = SymbolMeasure.uniform((3,))


# -- membership ---------------------------------------------------------------


def test_member_recovers_quotient(three_minus_t, carry_inverse):
    fel = three_minus_t.entry(0, 0)
    verdict = decide_membership((fel,), three_minus_t, carry_inverse)
    assert isinstance(verdict, Member)
    assert verdict.q == (mono(1),)

    q = mono(2) + mono(-5, T)
    verdict = decide_membership((q * fel,), three_minus_t, carry_inverse)
    assert verdict == Member((q,))


def test_non_member_witness(three_minus_t, carry_inverse):
    verdict = decide_membership((mono(1),), three_minus_t, carry_inverse)
    assert isinstance(verdict, NonMember)
    w = verdict.witness
    assert (w.element, w.k, w.j) == (E, 0, 1)
    assert w.value == Fraction(1, 3)
    assert w.err == Fraction(1, 1458)


def test_witness_fraction_is_sound(three_minus_t, carry_inverse):
    # witnessed coordinate must sit within err of j/M_k and off the integers
    verdict = decide_membership((mono(4) + mono(-1, T),), three_minus_t,
                                carry_inverse)
    assert isinstance(verdict, NonMember)
    w = verdict.witness
    delta = abs((w.value % 1) - Fraction(w.j, 3))
    assert min(delta, 1 - delta) <= w.err < Fraction(1, 6)


def test_budget_gate(three_minus_t, carry):
    shallow = truncated_inverse(carry, Fraction(45, 100), "column",
                                prune_threshold=0)
    big = (mono(900),)
    with pytest.raises(InsufficientPrecisionError):
        decide_membership(big, three_minus_t, shallow)


def test_witness_localization_gate(three_minus_t, carry_inverse):
    # budget in [1/6, 1/2): non-membership is certified but no witness is
    # localized at this resolution
    h = (mono(400),)
    with pytest.raises(WitnessNotLocalizedError):
        decide_membership(h, three_minus_t, carry_inverse)


def test_membership_rejects_fractional_input(three_minus_t, carry_inverse):
    with pytest.raises(ValueError):
        decide_membership((RingElement(Z, {E: Fraction(1, 2)}),),
                          three_minus_t, carry_inverse)


# -- Fourier ------------------------------------------------------------------


def test_haar_dichotomy(three_minus_t, carry_inverse):
    fel = three_minus_t.entry(0, 0)
    assert haar_fourier((fel,), three_minus_t, carry_inverse, UNIFORM3) == (1, 0)
    assert haar_fourier((mono(1),), three_minus_t, carry_inverse, UNIFORM3) == (0, 0)


def test_haar_zero_vector_is_member(three_minus_t, carry_inverse):
    assert haar_fourier((mono(0),), three_minus_t, carry_inverse, UNIFORM3) == (1, 0)


def test_haar_nonuniform_product(three_minus_t, carry_inverse):
    skew = SymbolMeasure((3,), {(0,): Fraction(1, 2), (1,): Fraction(1, 4),
                                (2,): Fraction(1, 4)})
    val, err = haar_fourier((mono(1),), three_minus_t, carry_inverse, skew)
    # first factor is nu-hat(1/3) ~ 1/4; later sites shrink it a little
    assert abs(val) < 0.5
    assert 0 < err < 0.01
    # deeper certificate, smaller error radius
    deep = truncated_inverse(
        decompose(three_minus_t), Fraction(1, 10**6), "column", prune_threshold=0)
    _, err2 = haar_fourier((mono(1),), three_minus_t, deep, skew)
    assert err2 < err


def test_haar_rejects_mismatched_alphabet(three_minus_t, carry_inverse):
    with pytest.raises(ValueError):
        haar_fourier((mono(1),), three_minus_t, carry_inverse,
                     SymbolMeasure.uniform((4,)))


def test_empirical_fourier_member_and_non(three_minus_t, carry_inverse):
    win = Window.ball(Z, 12)
    member = ((mono(2) + mono(-5, T)) * three_minus_t.entry(0, 0),)
    est = empirical_fourier(member, three_minus_t, carry_inverse, UNIFORM3,
                            trials=500, window=win, seed=7)
    bound = empirical_fourier_bound(member, three_minus_t, carry_inverse)
    assert abs(est - 1) <= 2 * 3.14159265358979 * bound
    non = empirical_fourier((mono(1),), three_minus_t, carry_inverse, UNIFORM3,
                            trials=2000, window=win, seed=7)
    assert abs(non) < 0.09  # 4 / sqrt(2000)


def test_empirical_fourier_window_gate(three_minus_t, carry_inverse):
    from lopact import WindowTooSmallError

    with pytest.raises(WindowTooSmallError):
        empirical_fourier((mono(1),), three_minus_t, carry_inverse, UNIFORM3,
                          trials=10, window=Window.ball(Z, 2), seed=0)


def test_empirical_fourier_deterministic(three_minus_t, carry_inverse):
    win = Window.ball(Z, 12)
    runs = {
        empirical_fourier((mono(1),), three_minus_t, carry_inverse, UNIFORM3,
                          trials=64, window=win, seed=5)
        for _ in range(3)
    }
    assert len(runs) == 1


# -- defect height ------------------------------------------------------------


def test_defect_height_carry(carry, carry_row_inverse):
    assert defect_height(carry, adjoint_inverse(carry_row_inverse)) == 2


def test_defect_height_monomial():
    d = decompose(RingMatrix(Z, ((mono(2),),)))
    inv = truncated_inverse(d, Fraction(1, 1000), "row", prune_threshold=0)
    assert defect_height(d, adjoint_inverse(inv)) == 1


def test_defect_height_monotone(carry):
    heights = []
    for eps in (Fraction(1, 3), Fraction(1, 30), Fraction(1, 300),
                Fraction(1, 3000), Fraction(1, 30000)):
        inv = truncated_inverse(carry, eps, "row", prune_threshold=0)
        heights.append(defect_height(carry, adjoint_inverse(inv)))
    assert heights == sorted(heights, reverse=True)


# -- collision search ---------------------------------------------------------


def window_values(col, s):
    return col.c_value(s, 0)


def test_full_mode_empty(carry):
    res = collision_search(carry, Window.ball(Z, 8), 2, mode=FULL)
    assert len(res) == 0
    assert res.complete


def test_boundary_open_family(carry):
    res = collision_search(carry, Window.ball(Z, 8), 2, mode=BOUNDARY_OPEN)
    assert res.complete
    assert len(res) == 68
    by_height = {}
    for col in res:
        by_height.setdefault(col.height(), []).append(col)
    assert {h: len(v) for h, v in by_height.items()} == {1: 34, 2: 34}
    for col in res:  # every one passes the range classification
        classify_collision(col, carry)


def test_boundary_open_carry_chain(carry):
    res = collision_search(carry, Window.ball(Z, 8), 2, mode=BOUNDARY_OPEN)
    runs = [col for col in res
            if all(col.c_value(T**i, 0) == 1 for i in range(1, 9))
            and col.c_value(E, 0) == 0]
    assert len(runs) == 1
    run = runs[0]
    assert run.intervals[(E, 0)] == (1, 2)
    assert run.intervals[(T, 0)] == (0, 0)
    labels = classify_collision(run, carry)
    assert all(lab.sign == 1 and lab.j == 1 and lab.l_b == 1 for lab in labels)
    assert {str(lab.element) for lab in labels} == \
        {f"t^{i}" if i > 1 else "t" for i in range(1, 8)}


def test_boundary_open_small_window(carry):
    # on [-4,4] the window edge hides t^4's constraint: the length-4 run
    # c = 1 on t..t^4 survives with y_0 in {1,2}
    res = collision_search(carry, Window.ball(Z, 4), 1, mode=BOUNDARY_OPEN)
    assert len(res) == 18
    match = [col for col in res
             if [col.c_value(T**i, 0) for i in range(1, 5)] == [1, 1, 1, 1]
             and sum(abs(col.c_value(s, 0)) for s in col.window) == 4]
    assert len(match) == 1
    assert match[0].intervals[(E, 0)] == (1, 2)
    assert (T**4, 0) not in match[0].determined


def test_collision_budget_flags_incomplete(carry):
    res = collision_search(carry, Window.ball(Z, 8), 2, mode=BOUNDARY_OPEN,
                           node_budget=100)
    assert not res.complete
    assert res.nodes <= 101  # the node that trips the budget is counted
    assert len(res) < 68


def test_degenerate_no_remainder():
    d = decompose(RingMatrix(Z, ((mono(2),),)))
    res = collision_search(d, Window.ball(Z, 4), 3, mode=BOUNDARY_OPEN)
    assert len(res) == 0 and res.complete


# -- brute-force oracle -------------------------------------------------------


def brute_force_full(d, window, height):
    """Independent check: direct convolution c f*, then per-coordinate scans.

    Each y coordinate appears in exactly one constraint of y + c f* in S_f,
    so coordinatewise feasibility is exact; candidates that pass get a
    literal product-space verification on the window.
    """
    spec = d.spec
    fstar = d.f.star().entry(0, 0)
    m = d.m_abs[0]
    found = []
    elements = list(window)
    for values in itertools.product(range(-height, height + 1),
                                    repeat=len(elements)):
        if not any(values):
            continue
        c = RingElement(spec, {s: v for s, v in zip(elements, values) if v})
        image = c * fstar
        ok = True
        for s in image.support():
            dv = image.coefficient(s)
            if s in window:
                if not any(0 <= y + dv <= m - 1 for y in range(m)):
                    ok = False
                    break
            elif not 0 <= dv <= m - 1:
                ok = False
                break
        if ok and _verify_literal(window, image, m):
            found.append(values)
    return found


def _verify_literal(window, image, m):
    for ys in itertools.product(range(m), repeat=len(window.elements)):
        good = True
        for s in image.support():
            y = ys[window.index(s)] if s in window else 0
            if not 0 <= y + image.coefficient(s) <= m - 1:
                good = False
                break
        if good:
            return True
    return False


def test_full_mode_agrees_with_brute_force(carry):
    window = Window.ball(Z, 3)
    expected = brute_force_full(carry, window, 2)
    res = collision_search(carry, window, 2, mode=FULL)
    got = [tuple(col.c_value(s, 0) for s in window) for col in res]
    assert sorted(got) == sorted(expected)
    assert expected == []  # the top-coordinate argument forces emptiness


def brute_force_boundary(d, window, height):
    spec = d.spec
    fstar = d.f.star().entry(0, 0)
    m = d.m_abs[0]
    g_support = list(d.g.entry(0, 0).support())
    determined = [s for s in window
                  if all(s * a in window for a in g_support)]
    found = []
    elements = list(window)
    for values in itertools.product(range(-height, height + 1),
                                    repeat=len(elements)):
        if not any(values):
            continue
        c = RingElement(spec, {s: v for s, v in zip(elements, values) if v})
        image = c * fstar
        enforced = [s for s in determined if image.coefficient(s) != 0]
        reads_c = any(
            c.coefficient(s) != 0 or
            any(c.coefficient(s * a) != 0 for a in g_support)
            for s in determined)
        if not reads_c:
            continue
        if all(any(0 <= y + image.coefficient(s) <= m - 1 for y in range(m))
               for s in enforced):
            found.append(values)
    return found


def test_boundary_mode_agrees_with_brute_force(carry):
    window = Window.ball(Z, 3)
    expected = brute_force_boundary(carry, window, 2)
    res = collision_search(carry, window, 2, mode=BOUNDARY_OPEN)
    got = [tuple(col.c_value(s, 0) for s in window) for col in res]
    assert sorted(got) == sorted(expected)
    assert expected != []


# -- E-range cross-check ------------------------------------------------------


def test_e_range_identity_random(worked_h):
    """(c f*)_{s,k} = M_k c_{s,k} - sum over A_k of g^{(km)}_a c_{sa,m}."""
    import random

    from lopact import ball, normalized_decomposition

    d = normalized_decomposition(decompose(worked_h))
    spec = d.spec
    rng = random.Random(99)
    sites = ball(spec, 2)
    for _ in range(50):
        c_vec = tuple(
            RingElement(spec, {s: rng.randint(-3, 3)
                               for s in rng.sample(sites, 5)})
            for _ in range(d.n))
        image = row_mul(c_vec, d.f.star())
        s = rng.choice(sites)
        for k in range(d.n):
            total = d.m_abs[k] * c_vec[k].coefficient(s)
            for m in range(d.n):
                for a, coeff in d.g.entry(k, m).terms():
                    total -= coeff * c_vec[m].coefficient(s * a)
            assert image[k].coefficient(s) == total
