"""Group-ring arithmetic with exact rational coefficients.

A :class:`RingElement` is a finitely supported map from group elements to
``fractions.Fraction``; multiplication is convolution
``(fg)_t = sum_s f_s g_{s^-1 t}`` and the involution is
``(f*)_s = f_{s^-1}``.  :class:`RingMatrix` is a square matrix of ring
elements with the two mixed norms

* row norm  ``||f||_{inf,1} = max_k sum_m ||f^(km)||_1``
* column norm ``||f||_{1,inf} = max_m sum_k ||f^(km)||_1``

both submultiplicative, and ``||f*||_{inf,1} = ||f||_{1,inf}``.

Everything here is exact: no floats enter, coefficients stay Fractions.
Values are immutable by convention; operations return fresh objects.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .group import GroupElement, GroupSpec

ROW = "row"
COLUMN = "column"
SIDES = (ROW, COLUMN)


def other_side(side: str) -> str:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    return COLUMN if side == ROW else ROW


class RingElement:
    """A finitely supported rational combination of group elements."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: GroupSpec, coeffs: Mapping[GroupElement, object] = ()):
        self.spec = spec
        clean: dict[GroupElement, Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for s, c in items:
            if s.spec != spec:
                raise ValueError("support element from a different group")
            c = Fraction(c)
            if c:
                clean[s] = clean.get(s, Fraction(0)) + c
                if not clean[s]:
                    del clean[s]
        self.coeffs = clean

    @classmethod
    def _raw(cls, spec: GroupSpec, coeffs: dict) -> "RingElement":
        out = object.__new__(cls)
        out.spec = spec
        out.coeffs = coeffs
        return out

    @classmethod
    def zero(cls, spec: GroupSpec) -> "RingElement":
        return cls._raw(spec, {})

    @classmethod
    def one(cls, spec: GroupSpec) -> "RingElement":
        return cls._raw(spec, {spec.identity(): Fraction(1)})

    @classmethod
    def monomial(cls, spec: GroupSpec, coeff, element: GroupElement) -> "RingElement":
        c = Fraction(coeff)
        return cls._raw(spec, {element: c} if c else {})

    @classmethod
    def constant(cls, spec: GroupSpec, coeff) -> "RingElement":
        return cls.monomial(spec, coeff, spec.identity())

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "RingElement"):
        if self.spec != other.spec:
            raise ValueError("ring elements over different groups")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            v = out.get(s, Fraction(0)) + c
            if v:
                out[s] = v
            elif s in out:
                del out[s]
        return RingElement._raw(self.spec, out)

    def __neg__(self) -> "RingElement":
        return RingElement._raw(self.spec, {s: -c for s, c in self.coeffs.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            self._check(other)
            out: dict[GroupElement, Fraction] = {}
            for s, a in self.coeffs.items():
                for t, b in other.coeffs.items():
                    key = s * t
                    v = out.get(key)
                    out[key] = a * b if v is None else v + a * b
            return RingElement._raw(
                self.spec, {k: v for k, v in out.items() if v})
        return self._scale(other)

    def __rmul__(self, other):
        return self._scale(other)  # scalars commute with everything

    def _scale(self, scalar) -> "RingElement":
        c = Fraction(scalar)
        if not c:
            return RingElement.zero(self.spec)
        return RingElement._raw(self.spec, {s: c * v for s, v in self.coeffs.items()})

    def star(self) -> "RingElement":
        """The involution sum_s f_s s  |->  sum_s f_{s^-1} s."""
        return RingElement._raw(self.spec,
                                {s.inverse(): c for s, c in self.coeffs.items()})

    # -- inspection --------------------------------------------------------

    def coefficient(self, element: GroupElement) -> Fraction:
        return self.coeffs.get(element, Fraction(0))

    def support(self) -> frozenset:
        return frozenset(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs.values())

    def l1_norm(self) -> Fraction:
        return sum((abs(c) for c in self.coeffs.values()), Fraction(0))

    def linf_norm(self) -> Fraction:
        return max((abs(c) for c in self.coeffs.values()), default=Fraction(0))

    def terms(self):
        """(element, coefficient) pairs in enumeration order."""
        return sorted(self.coeffs.items(), key=lambda kv: kv[0].sort_key())

    def __eq__(self, other):
        return (isinstance(other, RingElement)
                and self.spec == other.spec and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.spec, frozenset(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for s, c in self.terms():
            if s.is_identity:
                body = str(c)
            elif abs(c) == 1:
                body = repr(s) if c > 0 else f"-{s!r}"
            else:
                body = f"{c}*{s!r}"
            if parts and not body.startswith("-"):
                parts.append(f"+ {body}")
            elif parts:
                parts.append(f"- {body[1:]}")
            else:
                parts.append(body)
        return " ".join(parts)


class RingMatrix:
    """A square matrix over the group ring.  Rows and entries are tuples."""

    __slots__ = ("spec", "n", "rows")

    def __init__(self, spec: GroupSpec, rows: Sequence[Sequence[RingElement]]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise ValueError("matrix must be square")
            for el in r:
                if el.spec != spec:
                    raise ValueError("entry over a different group")
        self.spec = spec
        self.n = n
        self.rows = rows

    @classmethod
    def identity(cls, spec: GroupSpec, n: int) -> "RingMatrix":
        one, zero = RingElement.one(spec), RingElement.zero(spec)
        return cls(spec, [[one if i == j else zero for j in range(n)]
                          for i in range(n)])

    @classmethod
    def zero(cls, spec: GroupSpec, n: int) -> "RingMatrix":
        z = RingElement.zero(spec)
        return cls(spec, [[z] * n for _ in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[RingElement]) -> "RingMatrix":
        spec = entries[0].spec
        zero = RingElement.zero(spec)
        n = len(entries)
        return cls(spec, [[entries[i] if i == j else zero for j in range(n)]
                          for i in range(n)])

    def entry(self, k: int, m: int) -> RingElement:
        return self.rows[k][m]

    def row(self, k: int) -> tuple[RingElement, ...]:
        return self.rows[k]

    def column(self, m: int) -> tuple[RingElement, ...]:
        return tuple(self.rows[k][m] for k in range(self.n))

    def _check(self, other: "RingMatrix"):
        if self.spec != other.spec or self.n != other.n:
            raise ValueError("matrices of different shape or group")

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._check(other)
        return RingMatrix(self.spec, [
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        self._check(other)
        return RingMatrix(self.spec, [
            [a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "RingMatrix":
        return RingMatrix(self.spec, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, RingMatrix):
            self._check(other)
            n = self.n
            out = []
            for k in range(n):
                row = []
                for m in range(n):
                    acc = RingElement.zero(self.spec)
                    for j in range(n):
                        a = self.rows[k][j]
                        b = other.rows[j][m]
                        if not (a.is_zero or b.is_zero):
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return RingMatrix(self.spec, out)
        return RingMatrix(self.spec, [[other * a for a in r] for r in self.rows])

    def __rmul__(self, scalar):
        return RingMatrix(self.spec, [[scalar * a for a in r] for r in self.rows])

    def star(self) -> "RingMatrix":
        """Adjoint: transpose with entrywise involution."""
        return RingMatrix(self.spec, [
            [self.rows[m][k].star() for m in range(self.n)] for k in range(self.n)])

    def norm_row(self) -> Fraction:
        """||.||_{inf,1}: max over rows of the row sum of entry l1 norms."""
        return max(sum((e.l1_norm() for e in row), Fraction(0)) for row in self.rows)

    def norm_column(self) -> Fraction:
        """||.||_{1,inf}: max over columns of the column sum of entry l1 norms."""
        return max(
            sum((self.rows[k][m].l1_norm() for k in range(self.n)), Fraction(0))
            for m in range(self.n))

    def norm(self, side: str) -> Fraction:
        """The norm in which the given side's series contracts."""
        if side == ROW:
            return self.norm_row()
        if side == COLUMN:
            return self.norm_column()
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")

    def norms(self) -> tuple[Fraction, Fraction]:
        return self.norm_row(), self.norm_column()

    def support(self) -> frozenset:
        """All (element, row, column) triples carrying a nonzero coefficient."""
        return frozenset((s, k, m)
                         for k in range(self.n) for m in range(self.n)
                         for s in self.rows[k][m].coeffs)

    def support_size(self) -> int:
        return sum(len(self.rows[k][m].coeffs)
                   for k in range(self.n) for m in range(self.n))

    def is_integral(self) -> bool:
        return all(e.is_integral() for r in self.rows for e in r)

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for r in self.rows for e in r)

    def __eq__(self, other):
        return (isinstance(other, RingMatrix) and self.spec == other.spec
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.spec, self.rows))

    def __repr__(self):
        body = "; ".join(", ".join(repr(e) for e in row) for row in self.rows)
        return f"[{body}]"


def row_mul(vec: Sequence[RingElement], mat: RingMatrix) -> tuple[RingElement, ...]:
    """Row vector times matrix: (v f)_m = sum_k v_k f^(km)."""
    if len(vec) != mat.n:
        raise ValueError("vector length must equal the matrix size")
    out = []
    for m in range(mat.n):
        acc = RingElement.zero(mat.spec)
        for k in range(mat.n):
            if not (vec[k].is_zero or mat.rows[k][m].is_zero):
                acc = acc + vec[k] * mat.rows[k][m]
        out.append(acc)
    return tuple(out)


def zero_row(spec: GroupSpec, n: int) -> tuple[RingElement, ...]:
    return tuple(RingElement.zero(spec) for _ in range(n))


def row_max_l1(vec: Iterable[RingElement]) -> Fraction:
    return max((v.l1_norm() for v in vec), default=Fraction(0))
