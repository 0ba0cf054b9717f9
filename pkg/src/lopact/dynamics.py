"""Finite-window symbolic configurations and the homoclinic cover map.

A configuration assigns to each element of a finite window a symbol vector
from prod_k {0, ..., size_k - 1}; outside its window a configuration is
read as zero (the fill rule is explicit and fixed).  The cover map sends a
configuration y to the torus point x = pi(y . inv) where inv certifies an
approximation of (f*)^-1 in the column norm; every reported coordinate
carries an exact rational error radius combining the certificate tail, and
the mass the finite window cannot see.

Sampling is deterministic and splittable: the draw for window index i under
seed s is u64(s, i), where u64 hashes the little-endian 8-byte arguments
with BLAKE2b (digest size 8).  The exact construction is documented in the
CLI help and README so streams are reproducible bit for bit.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import group as _group
from .errors import InsufficientSupportError
from .group import GroupElement, GroupSpec
from .inverse import TruncatedInverse
from .ring import COLUMN, RingElement

_MASK = (1 << 64) - 1


def u64(*parts: int) -> int:
    """The package's counter-based generator: BLAKE2b over 8-byte words."""
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        h.update((p & _MASK).to_bytes(8, "little"))
    return int.from_bytes(h.digest(), "little")


class Window:
    """A finite set of group elements, kept sorted in enumeration order."""

    __slots__ = ("spec", "elements", "_index")

    def __init__(self, spec: GroupSpec, elements: Iterable[GroupElement]):
        elements = tuple(sorted(set(elements), key=GroupElement.sort_key))
        for el in elements:
            if el.spec != spec:
                raise ValueError("window element from a different group")
        self.spec = spec
        self.elements = elements
        self._index = {el: i for i, el in enumerate(elements)}

    @classmethod
    def ball(cls, spec: GroupSpec, radius: int) -> "Window":
        return cls(spec, _group.ball(spec, radius))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, el):
        return el in self._index

    def index(self, el: GroupElement) -> int:
        return self._index[el]

    def __eq__(self, other):
        return (isinstance(other, Window) and self.spec == other.spec
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.spec, self.elements))

    def __repr__(self):
        return f"Window({len(self.elements)} elements)"


@dataclass(frozen=True)
class Configuration:
    """Symbol vectors over a window; zero outside it by the fill rule."""

    window: Window
    sizes: tuple[int, ...]
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.values) != len(self.window):
            raise ValueError("one symbol vector per window element")
        for vec in self.values:
            if len(vec) != len(self.sizes):
                raise ValueError("symbol vector of wrong arity")
            for v, size in zip(vec, self.sizes):
                if not 0 <= v < size:
                    raise ValueError(f"symbol {v} outside alphabet of size {size}")

    @property
    def n(self) -> int:
        return len(self.sizes)

    def value_at(self, el: GroupElement) -> tuple[int, ...]:
        if el in self.window:
            return self.values[self.window.index(el)]
        return (0,) * self.n

    def max_abs(self) -> int:
        return max((max(vec) for vec in self.values), default=0)

    def to_row_vector(self) -> tuple[RingElement, ...]:
        spec = self.window.spec
        return tuple(
            RingElement(spec, {el: vec[k]
                               for el, vec in zip(self.window, self.values) if vec[k]})
            for k in range(self.n))


def shift(s: GroupElement, y: Configuration) -> Configuration:
    """Left shift: (s y)_t = y_{s^-1 t}, i.e. the value at w moves to s w."""
    pairs = sorted(((s * w, vec) for w, vec in zip(y.window, y.values)),
                   key=lambda p: p[0].sort_key())
    return Configuration(Window(y.window.spec, (p[0] for p in pairs)),
                         y.sizes, tuple(p[1] for p in pairs))


class SymbolMeasure:
    """A probability measure on the product alphabet, exact rational.

    Either uniform (table is None) or an explicit full joint table.  Tables
    are kept sorted lexicographically; cumulative sums drive exact
    inverse-CDF sampling from one 64-bit draw.
    """

    __slots__ = ("sizes", "table", "_cumulative")

    def __init__(self, sizes: Sequence[int],
                 table: Mapping[tuple[int, ...], object] | None = None):
        self.sizes = tuple(int(s) for s in sizes)
        if any(s < 1 for s in self.sizes):
            raise ValueError("alphabet sizes must be positive")
        if table is None:
            self.table = None
            self._cumulative = None
        else:
            items = []
            for sym in sorted(table):
                sym = tuple(sym)
                if len(sym) != len(self.sizes) or not all(
                        0 <= v < s for v, s in zip(sym, self.sizes)):
                    raise ValueError(f"symbol {sym} outside the alphabet")
                p = Fraction(table[sym])
                if p < 0:
                    raise ValueError("probabilities must be nonnegative")
                if p:
                    items.append((sym, p))
            if sum(p for _, p in items) != 1:
                raise ValueError("probabilities must sum to 1 exactly")
            self.table = tuple(items)
            cum = []
            acc = Fraction(0)
            for _, p in items:
                acc += p
                cum.append(acc)
            self._cumulative = tuple(cum)

    @classmethod
    def uniform(cls, sizes: Sequence[int]) -> "SymbolMeasure":
        return cls(sizes)

    @classmethod
    def from_table(cls, sizes: Sequence[int], table) -> "SymbolMeasure":
        return cls(sizes, table)

    @property
    def is_uniform(self) -> bool:
        return self.table is None

    def count(self) -> int:
        out = 1
        for s in self.sizes:
            out *= s
        return out

    def probability(self, symbol: tuple[int, ...]) -> Fraction:
        symbol = tuple(symbol)
        if self.table is None:
            return Fraction(1, self.count())
        for sym, p in self.table:
            if sym == symbol:
                return p
        return Fraction(0)

    def marginal(self, k: int) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.sizes[k]
        if self.table is None:
            return tuple([Fraction(1, self.sizes[k])] * self.sizes[k])
        for sym, p in self.table:
            out[sym[k]] += p
        return tuple(out)

    def has_uniform_marginals(self) -> bool:
        return all(
            self.marginal(k) == tuple([Fraction(1, s)] * s)
            for k, s in enumerate(self.sizes))

    def sample(self, draw: int) -> tuple[int, ...]:
        """Map one 64-bit draw to a symbol by exact inverse CDF.

        Uniform measures decode floor(draw * count / 2^64) in mixed radix
        (last component least significant); tables binary-search the exact
        cumulative rationals.
        """
        if self.table is None:
            idx = (draw * self.count()) >> 64
            out = []
            for size in reversed(self.sizes):
                out.append(idx % size)
                idx //= size
            return tuple(reversed(out))
        for (sym, _), cum in zip(self.table, self._cumulative):
            # draw/2^64 < cum  <=>  draw * den < num * 2^64
            if draw * cum.denominator < cum.numerator << 64:
                return sym
        return self.table[-1][0]

    def character(self, v: Sequence[Fraction]) -> complex:
        """nu-hat(v) = E exp(-2 pi i <y, v>).

        For the uniform measure the product over coordinates is evaluated
        factor by factor, and a factor whose v_k is a nonintegral multiple
        of 1/size_k is an exact root-of-unity sum equal to 0.
        """
        import cmath
        v = [Fraction(x) for x in v]
        if len(v) != len(self.sizes):
            raise ValueError("character argument of wrong arity")
        if self.table is None:
            out = complex(1)
            for vk, size in zip(v, self.sizes):
                scaled = vk * size
                if scaled.denominator == 1:
                    if vk.denominator == 1:
                        continue  # factor is exactly 1
                    return complex(0)  # exact vanishing root-of-unity sum
                acc = complex(0)
                for i in range(size):
                    acc += cmath.exp(-2j * cmath.pi * float((i * vk) % 1))
                out *= acc / size
            return out
        acc = complex(0)
        for sym, p in self.table:
            phase = sum((Fraction(s) * x for s, x in zip(sym, v)), Fraction(0))
            acc += float(p) * cmath.exp(-2j * cmath.pi * float(phase % 1))
        return acc


def sample_configuration(measure: SymbolMeasure, window: Window,
                         seed: int) -> Configuration:
    """Independent draws per window element: element i uses u64(seed, i)."""
    values = tuple(measure.sample(u64(seed, i)) for i in range(len(window)))
    return Configuration(window, measure.sizes, values)


@dataclass(frozen=True)
class TorusPoint:
    """Finitely many certified torus coordinates: (element, k) -> (value mod 1,
    exact rational error radius)."""

    coords: Mapping[tuple[GroupElement, int], tuple[Fraction, Fraction]]

    def value(self, el: GroupElement, k: int) -> Fraction:
        return self.coords[(el, k)][0]

    def err(self, el: GroupElement, k: int) -> Fraction:
        return self.coords[(el, k)][1]

    def items(self):
        return sorted(self.coords.items(),
                      key=lambda kv: (kv[0][0].sort_key(), kv[0][1]))


def pairing(x: TorusPoint, h: Sequence[RingElement]) -> tuple[Fraction, Fraction]:
    """<x, h> = (x h*)_e = sum_{s,k} x_{s,k} h_{s,k}, with propagated error.

    Every support coordinate of h must be present in x, else the pairing is
    not computable from the data at hand.
    """
    total = Fraction(0)
    err = Fraction(0)
    for k, hk in enumerate(h):
        for s, c in hk.coeffs.items():
            try:
                val, rad = x.coords[(s, k)]
            except KeyError:
                raise InsufficientSupportError(
                    f"torus point lacks coordinate ({s!r}, {k}) needed by the pairing")
            total += c * val
            err += abs(c) * rad
    return total % 1, err


def coordinate_terms(window: Window, inv: TruncatedInverse,
                     coords: Sequence[tuple[GroupElement, int]]):
    """For each requested (s, k): the finite dot-product presentation of
    (y . approx)_{s,k} over the window, plus the approx mass the window
    cannot see, weighted per component.

    Returns a list of (terms, blind_mass) where terms is a list of
    (window index, component m, coefficient) and blind_mass is
    sum_m (size_m - 1) * |approx^(mk)| mass at translates outside the
    window.  The weights size_m - 1 are applied by the caller, which knows
    the alphabet; here the raw per-component masses are returned.
    """
    a = inv.approx
    out = []
    for s, k in coords:
        if not 0 <= k < a.n:
            raise ValueError(f"component index {k} out of range")
        terms = []
        blind = [Fraction(0)] * a.n
        for m in range(a.n):
            for t, c in a.entry(m, k).coeffs.items():
                u = s * t.inverse()
                if u in window:
                    terms.append((window.index(u), m, c))
                else:
                    blind[m] += abs(c)
        out.append((terms, tuple(blind)))
    return out


def homoclinic_image(y: Configuration, inv: TruncatedInverse,
                     coords: Sequence[tuple[GroupElement, int]]) -> TorusPoint:
    """Coordinates of pi(y . approx) with exact error ledger.

    ``inv`` must certify an approximation of (f*)^-1 in the column norm
    (adjoint_inverse of a row-side inverse of f, or a column-side run on a
    decomposition of f*); the per-coordinate error is then

        ||y||_inf * tail_bound                     (certificate tail)
      + sum_m (size_m - 1) * blind approx mass     (window truncation)
      + (max_m size_m - 1) * tail_bound            (tail outside the window)

    where the truncation terms bound the contribution of any configuration
    agreeing with y on the window.
    """
    if inv.side != COLUMN:
        raise ValueError(
            "homoclinic_image needs a column-norm certificate for (f*)^-1; "
            "pass adjoint_inverse of a row-side inverse")
    if inv.approx.n != y.n:
        raise ValueError("alphabet arity does not match the matrix size")
    data = coordinate_terms(y.window, inv, coords)
    ymax = y.max_abs()
    top = max(size - 1 for size in y.sizes)
    out = {}
    for (s, k), (terms, blind) in zip(coords, data):
        val = Fraction(0)
        for i, m, c in terms:
            v = y.values[i][m]
            if v:
                val += v * c
        err = ymax * inv.tail_bound + top * inv.tail_bound
        for m, mass in enumerate(blind):
            err += (y.sizes[m] - 1) * mass
        out[(s, k)] = (val % 1, err)
    return TorusPoint(out)
