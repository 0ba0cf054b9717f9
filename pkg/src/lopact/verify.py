"""Desk-scale verification harness.

Two families of checks live here.  The first decides membership of an
integer row vector h in the row module (Z Gamma)^n f with an exact
certificate either way, and evaluates the Fourier coefficient of the
pushforward measure at h: members give exactly 1, non-members under the
uniform symbol measure give exactly 0 (the fractional-coordinate argument
pins the witnessed coordinate to a strict multiple of 1/M_k).  An
empirical estimator cross-checks the identity by Monte Carlo.

The second enumerates collision candidates for the symbolic cover map:
integer vectors c with 0 < ||c||_inf <= N whose image c f* can be absorbed
by symbol vectors, reported with per-coordinate admissible ranges and
classified against the combinatorial range constraints.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .dynamics import Configuration, SymbolMeasure, Window, u64
from .errors import (
    InsufficientPrecisionError,
    InvariantFailureError,
    WindowTooSmallError,
    WitnessNotLocalizedError,
)
from .group import GroupElement
from .inverse import TruncatedInverse
from .lopsided import LopsidedDecomposition, decompose
from .ring import COLUMN, ROW, RingElement, RingMatrix, row_mul

FULL = "full"
BOUNDARY_OPEN = "boundary-open"

# ---------------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class Witness:
    """A coordinate of h.approx whose fractional part is pinned to j/M_k.

    ``value`` is the computed rational coordinate; soundness requires
    |frac(value) - j/M_k| <= err < 1/(2 max_k M_k), so the true coordinate
    of h f^-1 sits within 2 err of j/M_k and strictly off every integer.
    """

    element: GroupElement
    k: int
    j: int
    value: Fraction
    err: Fraction


@dataclass(frozen=True)
class Member:
    q: tuple[RingElement, ...]


@dataclass(frozen=True)
class NonMember:
    witness: Witness


MembershipVerdict = Union[Member, NonMember]


def _as_decomposition(f) -> LopsidedDecomposition:
    if isinstance(f, LopsidedDecomposition):
        return f
    if isinstance(f, RingMatrix):
        return decompose(f)
    raise TypeError(f"expected a matrix or decomposition, got {type(f).__name__}")


def _coordinate_budget(h: Sequence[RingElement], inv: TruncatedInverse) -> Fraction:
    """Uniform bound on |(h.approx)_{s,k} - (h.f^-1)_{s,k}| over all (s,k)."""
    norms = [hm.l1_norm() for hm in h]
    if not norms:
        return Fraction(0)
    if inv.side == COLUMN:
        return max(norms) * inv.tail_bound
    return sum(norms, Fraction(0)) * inv.tail_bound


def _l1_budget(h: Sequence[RingElement], inv: TruncatedInverse) -> Fraction:
    """Bound on sum_{s,k} |(h.approx)_{s,k} - (h.f^-1)_{s,k}|."""
    norms = [hm.l1_norm() for hm in h]
    if not norms:
        return Fraction(0)
    if inv.side == ROW:
        return sum(norms, Fraction(0)) * inv.tail_bound
    return max(norms) * len(norms) * inv.tail_bound


def _round_nearest(x: Fraction) -> int:
    return round(x)


def _support_coords(vec: Sequence[RingElement]):
    """All (s, k) with vec_k nonzero at s, in enumeration order."""
    seen = set()
    for k, v in enumerate(vec):
        for s in v.coeffs:
            seen.add((s, k))
    return sorted(seen, key=lambda sk: (sk[0].sort_key(), sk[1]))


def decide_membership(h: Sequence[RingElement], f, inv: TruncatedInverse
                      ) -> MembershipVerdict:
    """Decide h in (Z Gamma)^n f with an exact certificate.

    Rounds h.approx to the nearest integer vector q and compares q f = h in
    exact arithmetic.  A match is a Member certificate outright.  On a
    mismatch the verdict is NonMember — if h were q' f for any integer q',
    the coordinate budget below 1/2 would have forced q' = q — and the
    first coordinate (enumeration order) whose fractional part sits within
    the budget of some j/M_k is attached as the witness.

    Raises InsufficientPrecisionError when the budget reaches 1/2 and
    WitnessNotLocalizedError when no witness coordinate is found at the
    resolution the certificate affords; both are cured by a deeper inverse.
    """
    d = _as_decomposition(f)
    h = tuple(h)
    if len(h) != d.n:
        raise ValueError(f"row vector of length {len(h)}, matrix is {d.n}x{d.n}")
    for hm in h:
        if not hm.is_integral():
            raise ValueError("membership is decided for integer vectors only")
    budget = _coordinate_budget(h, inv)
    if budget >= Fraction(1, 2):
        raise InsufficientPrecisionError(
            f"coordinate budget {budget} >= 1/2; deepen the inverse")
    w = row_mul(h, inv.approx)
    q = tuple(
        RingElement(d.spec, {s: _round_nearest(c) for s, c in wk.coeffs.items()
                             if _round_nearest(c)})
        for wk in w)
    if row_mul(q, d.f) == h:
        return Member(q)
    sizes = d.m_abs
    top = max(sizes)
    if budget >= Fraction(1, 2 * top):
        raise WitnessNotLocalizedError(
            f"non-member, but coordinate budget {budget} cannot separate "
            f"multiples of 1/{top}; deepen the inverse")
    for s, k in _support_coords(w):
        frac = w[k].coefficient(s) % 1
        for j in range(1, sizes[k]):
            delta = abs(frac - Fraction(j, sizes[k]))
            if min(delta, 1 - delta) <= budget:
                return NonMember(Witness(s, k, j, w[k].coefficient(s), budget))
    raise WitnessNotLocalizedError(
        "non-member, but no coordinate is within the budget of a fractional "
        "multiple; deepen the inverse")


def haar_fourier(h: Sequence[RingElement], f, inv: TruncatedInverse,
                 measure: SymbolMeasure) -> tuple[complex, float]:
    """Fourier coefficient of the pushforward measure at h, with error radius.

    Members give exactly (1, 0).  Non-members under the uniform measure give
    exactly (0, 0): the witnessed coordinate of h f^-1 is a strict multiple
    of 1/M_k (fractional-coordinate rationality for positively lopsided
    normalized f), so its character factor is a full root-of-unity sum.
    For a non-uniform measure the finite product of characters over the
    computed support is returned with a propagated radius.
    """
    d = _as_decomposition(f)
    if tuple(measure.sizes) != d.m_abs:
        raise ValueError(f"measure on alphabet {measure.sizes}, matrix has {d.m_abs}")
    verdict = decide_membership(h, d, inv)
    if isinstance(verdict, Member):
        return complex(1), 0.0
    if measure.is_uniform:
        return complex(0), 0.0
    w = row_mul(h, inv.approx)
    value = complex(1)
    for s in sorted({t for wk in w for t in wk.coeffs}, key=GroupElement.sort_key):
        value *= measure.character([wk.coefficient(s) for wk in w])
    return value, 2 * math.pi * float(_l1_budget(h, inv))


def empirical_fourier(h: Sequence[RingElement], f, inv: TruncatedInverse,
                      measure: SymbolMeasure, trials: int, window: Window,
                      seed: int) -> complex:
    """Monte Carlo estimate of the Fourier coefficient at h.

    Each trial draws y ~ measure^window (trial t, window index i consumes
    the draw u64(u64(seed, t), i)) and contributes exp(-2 pi i <phi_f(y), h>),
    evaluated through the pairing identity <phi_f(y), h> = sum_t y_t (h f^-1)_t
    with f^-1 replaced by the certified approximation.
    """
    d = _as_decomposition(f)
    if tuple(measure.sizes) != d.m_abs:
        raise ValueError(f"measure on alphabet {measure.sizes}, matrix has {d.m_abs}")
    if trials < 1:
        raise ValueError("at least one trial")
    w = row_mul(h, inv.approx)
    terms = []
    for k, wk in enumerate(w):
        for s, c in wk.coeffs.items():
            if s not in window:
                raise WindowTooSmallError(
                    f"support of h.approx reaches {s!r}, outside the window")
            terms.append((window.index(s), k, float(c)))
    sites = sorted({i for i, _, _ in terms})
    acc = complex(0)
    for trial in range(trials):
        trial_seed = u64(seed, trial)
        symbols = {i: measure.sample(u64(trial_seed, i)) for i in sites}
        theta = 0.0
        for i, k, c in terms:
            v = symbols[i][k]
            if v:
                theta += v * c
        acc += cmath.exp(-2j * cmath.pi * theta)
    return acc / trials


def empirical_fourier_bound(h: Sequence[RingElement], f,
                            inv: TruncatedInverse) -> Fraction:
    """Deterministic part of the empirical estimator's error.

    For a member h every sample's true phase is an exact integer, so the
    estimate differs from 1 by at most 2 pi (max_k M_k - 1) times the total
    l1 budget of h.approx; the factor 2 pi is left to the caller, keeping
    the bound rational.
    """
    d = _as_decomposition(f)
    return (max(d.m_abs) - 1) * _l1_budget(h, inv)


# ---------------------------------------------------------------------------
# collisions


def defect_height(d: LopsidedDecomposition, inv: TruncatedInverse) -> int:
    """Smallest integer N >= max_k M_k * (||approx||_{1,inf} + tail_bound).

    ``inv`` must certify (f*)^-1 in the column norm (adjoint_inverse of a
    row-side certificate for f does).  Any c with c f* bounded by the
    alphabet then satisfies ||c||_inf <= N, so the collision search box
    [-N, N] is exhaustive.
    """
    if inv.side != COLUMN:
        raise ValueError("defect height needs a column-norm certificate for (f*)^-1")
    bound = max(d.m_abs) * (inv.approx.norm_column() + inv.tail_bound)
    return math.ceil(bound)


@dataclass(eq=False)
class Collision:
    """One collision candidate: the integer vector c plus its constraints.

    ``image`` maps every coordinate touched by c f* (zero extension off the
    window) to its exact integer value; ``intervals`` maps each enforced
    coordinate to the admissible range of y there; ``y`` is the canonical
    representative taking each interval's lower endpoint.
    """

    window: Window
    sizes: tuple[int, ...]
    mode: str
    c: tuple[tuple[int, ...], ...]
    image: dict
    determined: frozenset
    intervals: dict
    y: Configuration = field(repr=False)

    def c_value(self, s: GroupElement, k: int) -> int:
        if s in self.window:
            return self.c[self.window.index(s)][k]
        return 0

    def height(self) -> int:
        return max(abs(v) for vec in self.c for v in vec)

    def __repr__(self):
        nz = sum(1 for vec in self.c for v in vec if v)
        return (f"Collision(mode={self.mode!r}, height={self.height()}, "
                f"support={nz})")


@dataclass(frozen=True)
class CollisionSearchResult:
    collisions: tuple[Collision, ...]
    complete: bool
    nodes: int

    def __iter__(self):
        return iter(self.collisions)

    def __len__(self):
        return len(self.collisions)


def _touched_coordinates(d: LopsidedDecomposition, window: Window):
    """All (s, k) where (c f*)_{s,k} can be nonzero for c on the window,
    with the list of contributing variables.

    Returns (coords, determined) where coords maps (s, k) to a list of
    (window index, component, coefficient) per the expansion
    (c f*)_{s,k} = M_k c_{s,k} - sum_{(a,m)} g^{(km)}_a c_{sa,m}.
    """
    n = d.n
    coords: dict = {}
    a_sets = []
    for k in range(n):
        a_k = []
        for m in range(n):
            for a, coeff in d.g.entry(k, m).coeffs.items():
                a_k.append((a, m, int(coeff)))
        a_sets.append(a_k)
    for i, s in enumerate(window):
        for k in range(n):
            coords.setdefault((s, k), []).append((i, k, d.m_abs[k]))
    for k in range(n):
        for a, m, coeff in a_sets[k]:
            a_inv = a.inverse()
            for i, w in enumerate(window):
                s = w * a_inv  # then s*a = w lies in the window
                coords.setdefault((s, k), []).append((i, m, -coeff))
    determined = set()
    for i, s in enumerate(window):
        for k in range(n):
            if all((s * a) in window for a, _, _ in a_sets[k]):
                determined.add((s, k))
    return coords, frozenset(determined)


def collision_search(d: LopsidedDecomposition, window: Window, height: int,
                     mode: str = FULL,
                     node_budget: int = 5_000_000) -> CollisionSearchResult:
    """Enumerate integer vectors c on the window with 0 < ||c||_inf <= height
    whose image c f* is absorbable by symbol vectors.

    ``full`` mode treats c as globally defined (zero off the window) and
    requires, at every touched coordinate (s, k), that some symbol value
    y_{s,k} satisfies y + (c f*) in {0..M_k-1}; off-window coordinates have
    y pinned to 0 by the fill rule, giving the one-sided constraint
    0 <= (c f*)_{s,k} <= M_k - 1 there.  ``boundary-open`` mode enforces
    only window-determined coordinates (every input visible), admitting
    truncations of infinite carry chains; candidates none of whose nonzero
    entries are read by an enforced constraint are vacuous and excluded.

    The exhaustive depth-first search prunes by interval arithmetic; if the
    node budget runs out the partial result is flagged incomplete.
    """
    if mode not in (FULL, BOUNDARY_OPEN):
        raise ValueError(f"mode must be {FULL!r} or {BOUNDARY_OPEN!r}")
    if height < 1:
        raise ValueError("height must be >= 1")
    if not d.is_normalized:
        raise ValueError("collision search requires a normalized decomposition")
    n = d.n
    coords, determined = _touched_coordinates(d, window)
    order = sorted(coords, key=lambda sk: (sk[0].sort_key(), sk[1]))
    nvars = len(window) * n

    cons_terms = []      # per constraint: list of (var, coeff)
    cons_bounds = []     # per constraint: (lo, hi) or None when not enforced
    var_cons: list[list[tuple[int, int]]] = [[] for _ in range(nvars)]
    for ci, sk in enumerate(order):
        s, k = sk
        terms = [(i * n + m, coeff) for i, m, coeff in coords[sk]]
        cons_terms.append(terms)
        if mode == FULL:
            bound = (0, d.m_abs[k] - 1) if s not in window else \
                (-(d.m_abs[k] - 1), d.m_abs[k] - 1)
        else:
            bound = (-(d.m_abs[k] - 1), d.m_abs[k] - 1) if sk in determined else None
        cons_bounds.append(bound)
        for v, coeff in terms:
            var_cons[v].append((ci, coeff))

    watched = [bool(any(cons_bounds[ci] is not None for ci, _ in var_cons[v]))
               for v in range(nvars)]
    partial = [0] * len(order)
    slack = [sum(abs(coeff) for _, coeff in terms) * height for terms in cons_terms]
    values = [0] * nvars
    found: list[list[int]] = []
    nodes = 0
    complete = True

    value_order = [0]
    for v in range(1, height + 1):
        value_order.extend((v, -v))

    def feasible(ci: int) -> bool:
        b = cons_bounds[ci]
        if b is None:
            return True
        return partial[ci] - slack[ci] <= b[1] and partial[ci] + slack[ci] >= b[0]

    def dfs(v: int) -> bool:
        nonlocal nodes, complete
        if v == nvars:
            if any(values) and (mode == FULL
                                or any(values[i] and watched[i] for i in range(nvars))):
                found.append(list(values))
            return True
        for val in value_order:
            nodes += 1
            if nodes > node_budget:
                complete = False
                return False
            values[v] = val
            ok = True
            for ci, coeff in var_cons[v]:
                partial[ci] += coeff * val
                slack[ci] -= abs(coeff) * height
            for ci, _ in var_cons[v]:
                if not feasible(ci):
                    ok = False
                    break
            if ok and not dfs(v + 1):
                ok = None
            for ci, coeff in var_cons[v]:
                partial[ci] -= coeff * val
                slack[ci] += abs(coeff) * height
            values[v] = 0
            if ok is None:
                return False
        return True

    dfs(0)
    found.sort()
    collisions = tuple(
        _build_collision(d, window, mode, vals, order, cons_terms, cons_bounds)
        for vals in found)
    return CollisionSearchResult(collisions, complete, nodes)


def _build_collision(d, window, mode, values, order, cons_terms, cons_bounds):
    n = d.n
    c = tuple(tuple(values[i * n + m] for m in range(n))
              for i in range(len(window)))
    image = {}
    intervals = {}
    y_vals = [[0] * n for _ in range(len(window))]
    for ci, sk in enumerate(order):
        total = sum(coeff * values[v] for v, coeff in cons_terms[ci])
        image[sk] = total
        if cons_bounds[ci] is not None:
            s, k = sk
            if s in window:
                lo = max(0, -total)
                hi = d.m_abs[k] - 1 - max(0, total)
                intervals[sk] = (lo, hi)
                y_vals[window.index(s)][k] = lo
            else:
                intervals[sk] = (0, 0)
    _, determined = _touched_coordinates(d, window)
    y = Configuration(window, d.m_abs, tuple(tuple(v) for v in y_vals))
    return Collision(window=window, sizes=d.m_abs, mode=mode, c=c, image=image,
                     determined=determined, intervals=intervals, y=y)


@dataclass(frozen=True)
class CollisionLabel:
    """Classification of one realizing coordinate of a collision."""

    sign: int
    j: int
    element: GroupElement
    k: int
    b_set: frozenset
    l_b: int
    y_range: tuple[int, int]


def classify_collision(col: Collision, d: LopsidedDecomposition
                       ) -> tuple[CollisionLabel, ...]:
    """Labels (sign, j, s, k, B_k, i) at determined realizing coordinates,
    with the combinatorial range bounds asserted.

    j = ||c||_inf; a realizing coordinate has c_{s,k} = +-j.  There
    B_k = {(a, m) in A_k : c_{sa,m} = +-sgn(g^{(km)}_a) j} and
    L_B = sum over B_k of |g^{(km)}_a|; admissible y_{s,k} must satisfy
    i <= L_B - 1 in the + case and i >= M_k - L_B in the - case.  The
    expansion (c f*)_{s,k} = M_k c_{s,k} - sum g^{(km)}_a c_{sa,m} is also
    cross-checked against the direct ring convolution at every touched
    coordinate.  Violations raise InvariantFailureError.
    """
    n = d.n
    spec = d.spec
    c_vec = tuple(
        RingElement(spec, {s: vec[m] for s, vec in zip(col.window, col.c) if vec[m]})
        for m in range(n))
    direct = row_mul(c_vec, d.f.star())
    for (s, k), val in col.image.items():
        if direct[k].coefficient(s) != val:
            raise InvariantFailureError(
                f"image expansion disagrees with direct convolution at ({s!r}, {k}): "
                f"{val} vs {direct[k].coefficient(s)}")
    for k in range(n):
        for s, val in direct[k].coeffs.items():
            if (s, k) not in col.image:
                raise InvariantFailureError(
                    f"direct convolution has support at untouched ({s!r}, {k})")
    j = col.height()
    labels = []
    for i, s in enumerate(col.window):
        for k in range(n):
            if abs(col.c[i][k]) != j or (s, k) not in col.determined:
                continue
            sign = 1 if col.c[i][k] > 0 else -1
            b_set = set()
            l_b = 0
            for m in range(n):
                for a, coeff in d.g.entry(k, m).coeffs.items():
                    target = sign * (1 if coeff > 0 else -1) * j
                    if col.c_value(s * a, m) == target:
                        b_set.add((a, m))
                        l_b += abs(int(coeff))
            lo, hi = col.intervals[(s, k)]
            if sign > 0 and hi > l_b - 1:
                raise InvariantFailureError(
                    f"+ range bound violated at ({s!r}, {k}): "
                    f"admissible y up to {hi}, bound {l_b - 1}")
            if sign < 0 and lo < d.m_abs[k] - l_b:
                raise InvariantFailureError(
                    f"- range bound violated at ({s!r}, {k}): "
                    f"admissible y down to {lo}, bound {d.m_abs[k] - l_b}")
            labels.append(CollisionLabel(sign, j, s, k, frozenset(b_set),
                                         l_b, (lo, hi)))
    return tuple(labels)
