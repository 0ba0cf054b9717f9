"""Finitely generated groups in canonical normal form, plus order oracles.

Two kinds of group are supported: free groups on named generators and
free-abelian groups Z^d.  Elements are stored run-length encoded as
``(generator index, exponent)`` pairs.  For free groups this is the reduced
word (adjacent indices distinct, exponents nonzero); for free-abelian groups
it is the exponent vector with zero entries dropped and indices strictly
increasing.  Both are unique normal forms, so elements are hashable and
serve as exact dictionary keys.

A total enumeration order is fixed once and for all: breadth-first by word
length, then lexicographically by (generator index, exponent sign) over the
expanded letter sequence, positive sign first.  Every deterministic
tie-break in the package refers to this order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import OracleIncompleteError

FREE = "free"
FREE_ABELIAN = "free-abelian"

Letters = "tuple[tuple[int, int], ...]"


@dataclass(frozen=True)
class GroupSpec:
    """A group presentation: ``kind`` plus an ordered tuple of generator names."""

    kind: str
    generators: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in (FREE, FREE_ABELIAN):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if not isinstance(self.generators, tuple):
            object.__setattr__(self, "generators", tuple(self.generators))
        if not self.generators:
            raise ValueError("a group needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be distinct")
        for name in self.generators:
            if not name.isidentifier():
                raise ValueError(f"generator name {name!r} is not an identifier")
            if name == "e":
                raise ValueError("'e' is reserved for the identity element")

    @classmethod
    def free(cls, *names: str) -> "GroupSpec":
        return cls(FREE, tuple(names))

    @classmethod
    def free_abelian(cls, names_or_rank) -> "GroupSpec":
        """Free-abelian spec from a rank (auto-named t1..td, or t for d=1) or names."""
        if isinstance(names_or_rank, int):
            rank = names_or_rank
            names = ("t",) if rank == 1 else tuple(f"t{i+1}" for i in range(rank))
        else:
            names = tuple(names_or_rank)
        return cls(FREE_ABELIAN, names)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def identity(self) -> "GroupElement":
        return GroupElement(self, ())

    def generator(self, which) -> "GroupElement":
        """Generator by name or index."""
        idx = which if isinstance(which, int) else self.generators.index(which)
        if not 0 <= idx < self.rank:
            raise ValueError(f"no generator {which!r}")
        return GroupElement(self, ((idx, 1),))

    def element(self, letters: Iterable[tuple[int, int]]) -> "GroupElement":
        """Build an element from (index, exponent) pairs, normalizing."""
        letters = tuple(letters)
        for idx, _ in letters:
            if not 0 <= idx < self.rank:
                raise ValueError(f"generator index {idx} out of range")
        if self.kind == FREE:
            return GroupElement(self, _reduce_free(letters))
        return GroupElement(self, _merge_abelian(letters))

    def from_vector(self, vector: Sequence[int]) -> "GroupElement":
        """Free-abelian element from a full exponent vector."""
        if self.kind != FREE_ABELIAN:
            raise ValueError("from_vector only applies to free-abelian groups")
        if len(vector) != self.rank:
            raise ValueError("vector length must equal the rank")
        return GroupElement(self, tuple((i, v) for i, v in enumerate(vector) if v))


def _reduce_free(letters) -> tuple:
    out: list[tuple[int, int]] = []
    for idx, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == idx:
            merged = out[-1][1] + exp
            out.pop()
            if merged:
                out.append((idx, merged))
        else:
            out.append((idx, exp))
    return tuple(out)


def _merge_abelian(letters) -> tuple:
    acc: dict[int, int] = {}
    for idx, exp in letters:
        acc[idx] = acc.get(idx, 0) + exp
    return tuple((i, acc[i]) for i in sorted(acc) if acc[i])


class GroupElement:
    """An immutable group element in normal form.

    Do not mutate ``letters``; construct via GroupSpec.element / operators.
    """

    __slots__ = ("spec", "letters", "_hash", "_key")

    def __init__(self, spec: GroupSpec, letters):
        self.spec = spec
        self.letters = letters
        self._hash = hash((spec.kind, spec.generators, letters))
        self._key = None

    def _check(self, other: "GroupElement"):
        if self.spec != other.spec:
            raise ValueError("elements live in different groups")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        if self.spec.kind == FREE:
            return GroupElement(self.spec, _reduce_free(self.letters + other.letters))
        return GroupElement(self.spec, _merge_abelian(self.letters + other.letters))

    def inverse(self) -> "GroupElement":
        if self.spec.kind == FREE:
            return GroupElement(self.spec,
                                tuple((i, -e) for i, e in reversed(self.letters)))
        return GroupElement(self.spec, tuple((i, -e) for i, e in self.letters))

    __invert__ = inverse

    def __pow__(self, n: int) -> "GroupElement":
        if n == 0:
            return self.spec.identity()
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def word_length(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def vector(self) -> tuple[int, ...]:
        """Full exponent vector (free-abelian only)."""
        if self.spec.kind != FREE_ABELIAN:
            raise ValueError("vector() only applies to free-abelian groups")
        out = [0] * self.spec.rank
        for i, e in self.letters:
            out[i] = e
        return tuple(out)

    def sort_key(self):
        """Total enumeration order: length, then (index, sign) letter sequence."""
        if self._key is None:
            expanded = []
            for i, e in self.letters:
                expanded.extend([(i, 0 if e > 0 else 1)] * abs(e))
            self._key = (len(expanded), tuple(expanded))
        return self._key

    def __eq__(self, other):
        return (isinstance(other, GroupElement)
                and self.spec == other.spec and self.letters == other.letters)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.letters:
            return "e"
        names = self.spec.generators
        return "*".join(
            names[i] if e == 1 else f"{names[i]}^{e}" for i, e in self.letters)


def ball(spec: GroupSpec, radius: int) -> tuple[GroupElement, ...]:
    """All elements of word length <= radius, in enumeration order."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if spec.kind == FREE:
        words = [()]
        frontier = [()]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for i in range(spec.rank):
                    for s in (1, -1):
                        if w and w[-1][0] == i:
                            if (w[-1][1] > 0) != (s > 0):
                                continue  # would cancel: shorter word, seen already
                            nw = w[:-1] + ((i, w[-1][1] + s),)
                        else:
                            nw = w + ((i, s),)
                        nxt.append(nw)
            words.extend(nxt)
            frontier = nxt
        elements = [GroupElement(spec, w) for w in words]
    else:
        elements = [GroupElement(spec, tuple((i, v) for i, v in enumerate(vec) if v))
                    for vec in _abelian_ball(spec.rank, radius)]
    elements.sort(key=GroupElement.sort_key)
    return tuple(elements)


def _abelian_ball(rank: int, radius: int) -> Iterator[tuple[int, ...]]:
    if rank == 0:
        yield ()
        return
    for v in range(-radius, radius + 1):
        for rest in _abelian_ball(rank - 1, radius - abs(v)):
            yield (v,) + rest


class OrderOracle:
    """Strict right-invariant partial order given by a positivity set P.

    ``s < t`` iff ``t * s^-1`` lies in P.  Subclasses implement
    :meth:`is_positive`; they may raise :class:`OracleIncompleteError` when
    membership is undecidable for them, but must never answer wrongly.
    """

    spec: GroupSpec

    def is_positive(self, element: GroupElement) -> bool:
        raise NotImplementedError

    def less(self, s: GroupElement, t: GroupElement) -> bool:
        return self.is_positive(t * s.inverse())

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class HomomorphismOrder(OrderOracle):
    """P = {s : [s] > 0} for a group homomorphism [.] : G -> Z given by weights."""

    spec: GroupSpec
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.weights) != self.spec.rank:
            raise ValueError("one weight per generator")

    @classmethod
    def from_weights(cls, spec: GroupSpec, mapping: dict[str, int]) -> "HomomorphismOrder":
        unknown = set(mapping) - set(spec.generators)
        if unknown:
            raise ValueError(f"weights for unknown generators: {sorted(unknown)}")
        return cls(spec, tuple(mapping.get(name, 0) for name in spec.generators))

    def value(self, element: GroupElement) -> int:
        return sum(e * self.weights[i] for i, e in element.letters)

    def is_positive(self, element: GroupElement) -> bool:
        return self.value(element) > 0

    def describe(self) -> str:
        pairs = ", ".join(f"{n}:{w}" for n, w in zip(self.spec.generators, self.weights))
        return f"homomorphism({pairs})"


class SemigroupOrder(OrderOracle):
    """P = semigroup generated by explicit positive elements.

    Membership is decided only when every positive generator is a positive
    word (all exponents positive); then a product of generators never
    cancels, and membership is a word-break problem over the expanded letter
    string (free) or a nonnegative lattice-vector decomposition
    (free-abelian).  Anything else raises OracleIncompleteError.
    """

    def __init__(self, spec: GroupSpec, positive_generators: Iterable[GroupElement]):
        self.spec = spec
        self.positive_generators = tuple(positive_generators)
        if not self.positive_generators:
            raise ValueError("a semigroup order needs at least one generator")
        for g in self.positive_generators:
            if g.spec != spec:
                raise ValueError("semigroup generator from a different group")
            if g.is_identity:
                raise ValueError("the identity may not be a positive generator")
        self._decidable = all(
            all(e > 0 for _, e in g.letters) for g in self.positive_generators)
        if spec.kind == FREE:
            self._gen_strings = tuple(_expand_positive(g) for g in self.positive_generators)
        else:
            self._gen_vectors = tuple(g.vector() for g in self.positive_generators)
        self._abelian_memo: dict[tuple[int, ...], bool] = {}

    def is_positive(self, element: GroupElement) -> bool:
        if element.spec != self.spec:
            raise ValueError("element from a different group")
        if not self._decidable:
            raise OracleIncompleteError(
                "semigroup membership is only decided when every positive "
                "generator is a positive word")
        if element.is_identity:
            return False
        if any(e < 0 for _, e in element.letters):
            return False  # products of positive words have no inverse letters
        if self.spec.kind == FREE:
            return self._member_free(_expand_positive(element))
        return self._member_abelian(element.vector())

    def _member_free(self, string: tuple[int, ...]) -> bool:
        n = len(string)
        reach = [False] * (n + 1)
        reach[0] = True
        for pos in range(n):
            if not reach[pos]:
                continue
            for gen in self._gen_strings:
                end = pos + len(gen)
                if end <= n and string[pos:end] == gen:
                    reach[end] = True
        return reach[n]

    def _member_abelian(self, vector: tuple[int, ...]) -> bool:
        memo = self._abelian_memo

        def go(v: tuple[int, ...]) -> bool:
            cached = memo.get(v)
            if cached is not None:
                return cached
            memo[v] = False  # guards cycles; all generators are nonzero so none occur
            ok = False
            for gen in self._gen_vectors:
                w = tuple(a - b for a, b in zip(v, gen))
                if all(x >= 0 for x in w) and (not any(w) or go(w)):
                    ok = True
                    break
            memo[v] = ok
            return ok

        return go(vector)

    def describe(self) -> str:
        gens = ", ".join(repr(g) for g in self.positive_generators)
        return f"semigroup<{gens}>"

    def __repr__(self):
        return f"SemigroupOrder({self.describe()})"


def _expand_positive(element: GroupElement) -> tuple[int, ...]:
    out: list[int] = []
    for i, e in element.letters:
        out.extend([i] * e)
    return tuple(out)
