"""Dominant-diagonal ("lopsided") structure of integer group-ring matrices.

A square f over the integer group ring is split as f = M - g where
M = diag(M_1 s_1, ..., M_n s_n) picks one integer monomial per diagonal
entry and g collects everything else.  f is *row lopsided* when every
|M_k| strictly dominates its row sum of l1 norms of g, *column lopsided*
when it dominates the column sums, and *positively* so when on top of that
a right-invariant order places the support of g strictly above the chosen
diagonal positions: P >= supp(g^(km) s_m^-1) for all k, m.

Normalization multiplies on the right by the unitary
u = diag(sgn(M_1) s_1, ...), moving the dominant monomials to positive
integers at the identity without changing either flag or the alphabet.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NoCandidateError, OracleIncompleteError
from .group import GroupElement, GroupSpec, OrderOracle
from .ring import RingElement, RingMatrix


class Positivity(enum.Enum):
    """Outcome of an order-oracle check; UNDETERMINED is a first-class value."""

    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class SymbolAlphabet:
    """The product alphabet prod_k {0, ..., |M_k| - 1}."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if not all(isinstance(s, int) and s >= 1 for s in self.sizes):
            raise ValueError("alphabet sizes must be positive integers")

    def count(self) -> int:
        out = 1
        for s in self.sizes:
            out *= s
        return out

    def __iter__(self):
        return iter(itertools.product(*(range(s) for s in self.sizes)))

    def __contains__(self, symbol) -> bool:
        return (len(symbol) == len(self.sizes)
                and all(0 <= v < s for v, s in zip(symbol, self.sizes)))


@dataclass(eq=False)
class LopsidedDecomposition:
    """f = M - g with the chosen diagonal monomials and dominance flags.

    ``alternatives[k]`` lists the other diagonal monomials of entry (k,k)
    that would have validated the same preference class as the chosen one.
    Order-oracle certificates are attached by :func:`classify_positive`.
    """

    f: RingMatrix
    m_coeffs: tuple[int, ...]
    m_elems: tuple[GroupElement, ...]
    g: RingMatrix
    row_lopsided: bool
    column_lopsided: bool
    alternatives: tuple[tuple[tuple[int, GroupElement], ...], ...]
    row_certificate: OrderOracle | None = field(default=None, compare=False)
    column_certificate: OrderOracle | None = field(default=None, compare=False)

    @property
    def spec(self) -> GroupSpec:
        return self.f.spec

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def m_abs(self) -> tuple[int, ...]:
        return tuple(abs(c) for c in self.m_coeffs)

    @property
    def m_max(self) -> int:
        return max(self.m_abs)

    def m_matrix(self) -> RingMatrix:
        return RingMatrix.diagonal([
            RingElement.monomial(self.spec, c, s)
            for c, s in zip(self.m_coeffs, self.m_elems)])

    @property
    def is_normalized(self) -> bool:
        return (all(s.is_identity for s in self.m_elems)
                and all(c > 0 for c in self.m_coeffs))

    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(
            sum((self.g.entry(k, m).l1_norm() for m in range(self.n)), Fraction(0))
            for k in range(self.n))

    def column_sums(self) -> tuple[Fraction, ...]:
        return tuple(
            sum((self.g.entry(k, m).l1_norm() for k in range(self.n)), Fraction(0))
            for m in range(self.n))


def decompose(f: RingMatrix) -> LopsidedDecomposition:
    """Choose dominant diagonal monomials for an integer matrix.

    Preference order over candidate tuples: both flags, then row only, then
    column only; within a class the first monomial in group enumeration
    order wins.  If no choice validates either side, the fallback maximizes
    min_k (|M_k| - row sum), which reduces to the per-row largest
    |coefficient|, and both flags are False.
    """
    if not f.is_integral():
        raise ValueError("decompose expects a matrix over the integer group ring")
    n = f.n
    row_tot = [sum((f.entry(k, m).l1_norm() for m in range(n)), Fraction(0))
               for k in range(n)]
    col_tot = [sum((f.entry(k, m).l1_norm() for k in range(n)), Fraction(0))
               for m in range(n)]

    per_k = []
    for k in range(n):
        diag = f.entry(k, k)
        if diag.is_zero:
            raise NoCandidateError(
                f"diagonal entry ({k},{k}) is zero: no dominant monomial candidate")
        cands = []
        for s, c in diag.terms():
            a = abs(c)
            row_ok = a > row_tot[k] - a
            col_ok = a > col_tot[k] - a
            cands.append((s, int(c), row_ok, col_ok))
        per_k.append(cands)

    def pick(pred):
        chosen, alts = [], []
        for cands in per_k:
            good = [c for c in cands if pred(c)]
            if not good:
                return None, None
            chosen.append(good[0])
            alts.append(tuple((c[1], c[0]) for c in good[1:]))
        return chosen, alts

    chosen = alts = None
    for pred in (lambda c: c[2] and c[3], lambda c: c[2], lambda c: c[3]):
        chosen, alts = pick(pred)
        if chosen is not None:
            break
    if chosen is None:
        chosen, alts = [], []
        for cands in per_k:
            best = max(abs(c[1]) for c in cands)
            pool = [c for c in cands if abs(c[1]) == best]
            chosen.append(pool[0])
            alts.append(tuple((c[1], c[0]) for c in pool[1:]))

    m_elems = tuple(c[0] for c in chosen)
    m_coeffs = tuple(c[1] for c in chosen)
    m_mat = RingMatrix.diagonal([
        RingElement.monomial(f.spec, c, s) for c, s in zip(m_coeffs, m_elems)])
    g = m_mat - f
    row_flag = all(abs(m_coeffs[k]) > sum(
        (g.entry(k, m).l1_norm() for m in range(n)), Fraction(0)) for k in range(n))
    col_flag = all(abs(m_coeffs[m]) > sum(
        (g.entry(k, m).l1_norm() for k in range(n)), Fraction(0)) for m in range(n))
    return LopsidedDecomposition(
        f=f, m_coeffs=m_coeffs, m_elems=m_elems, g=g,
        row_lopsided=row_flag, column_lopsided=col_flag,
        alternatives=tuple(alts))


def classify_positive(d: LopsidedDecomposition,
                      oracle: OrderOracle) -> tuple[Positivity, Positivity]:
    """Check the order condition s_m < t for all t in supp(g^(km)), all k, m.

    The condition itself is side-independent; each side's answer gates it by
    that side's dominance flag.  An incomplete oracle yields UNDETERMINED
    (never a silent false); a decisive negative yields NO even if other
    queries are undecidable.  On YES the oracle is recorded as certificate.
    """
    if not (d.row_lopsided or d.column_lopsided):
        raise ValueError("positivity is only defined once a dominance flag holds")
    saw_incomplete = False
    verdict = Positivity.YES
    for k in range(d.n):
        for m in range(d.n):
            s_m_inv = d.m_elems[m].inverse()
            for t in d.g.entry(k, m).coeffs:
                try:
                    if not oracle.is_positive(t * s_m_inv):
                        verdict = Positivity.NO
                except OracleIncompleteError:
                    saw_incomplete = True
    if verdict is Positivity.YES and saw_incomplete:
        verdict = Positivity.UNDETERMINED

    row = verdict if d.row_lopsided else Positivity.NO
    col = verdict if d.column_lopsided else Positivity.NO
    if row is Positivity.YES:
        d.row_certificate = oracle
    if col is Positivity.YES:
        d.column_certificate = oracle
    return row, col


def symbol_alphabet(d: LopsidedDecomposition) -> SymbolAlphabet:
    if not (d.row_lopsided or d.column_lopsided):
        raise ValueError("the symbol alphabet is only defined for lopsided matrices")
    return SymbolAlphabet(d.m_abs)


def normalize(d: LopsidedDecomposition) -> RingMatrix:
    """Right-multiply by u^-1 = diag(sgn(M_m) s_m^-1): column m of f moves so
    the dominant monomial becomes |M_m| at the identity.  Flags and alphabet
    are unchanged; normalize is idempotent on already-normalized input."""
    spec = d.spec
    cols = [RingElement.monomial(spec, 1 if d.m_coeffs[m] > 0 else -1,
                                 d.m_elems[m].inverse())
            for m in range(d.n)]
    return RingMatrix(spec, [
        [d.f.entry(k, m) * cols[m] for m in range(d.n)] for k in range(d.n)])


def normalized_decomposition(d: LopsidedDecomposition) -> LopsidedDecomposition:
    return decompose(normalize(d))
