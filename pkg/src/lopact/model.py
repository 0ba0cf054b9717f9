"""Line-oriented model files.

A model declares the group, an optional order oracle, the matrix, and
default options::

    [group]
    kind = free
    generators = a b

    [order]
    kind = semigroup

    [matrix]
    n = 2
    entry.1.1 = 7 - 2*a^3*b^2
    entry.1.2 = 3*a + 1*b^7*a
    entry.2.1 = 5*b^2*a^4
    entry.2.2 = -10 - 3*a^8

    [options]
    eps = 1/1000

Entry expressions follow  expr := ['+'|'-'] term (('+'|'-') term)*,
term := integer ['*' word] | word,  word := atom ('*' atom)*,
atom := name ['^' signed-integer],  with 'e' naming the identity.  The
canonical emitter always writes the integer-led form.  '#' starts a
comment.  Whitespace inside expressions is insignificant.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ModelSyntaxError
from .group import (
    FREE,
    FREE_ABELIAN,
    GroupElement,
    GroupSpec,
    HomomorphismOrder,
    OrderOracle,
    SemigroupOrder,
)
from .ring import RingElement, RingMatrix

_SECTIONS = ("group", "order", "matrix", "options")
_NAME_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_NAME_CONT = _NAME_START | set("0123456789")


@dataclass(eq=False)
class Model:
    group: GroupSpec
    oracle: OrderOracle | None
    n: int
    entries: dict  # (k, m) 0-based -> RingElement
    options: dict = field(default_factory=dict)

    def matrix(self) -> RingMatrix:
        rows = tuple(tuple(self.entries[(k, m)] for m in range(self.n))
                     for k in range(self.n))
        return RingMatrix(self.group, rows)

    def option(self, key: str, default=None):
        return self.options.get(key, default)


# ---------------------------------------------------------------------------
# expression parsing


class _Tokens:
    """Tokenizer over one expression with absolute column tracking."""

    def __init__(self, text: str, line: int, col0: int):
        self.text = text
        self.line = line
        self.col0 = col0
        self.pos = 0
        self.toks: list[tuple[str, object, int]] = []
        self._scan()
        self.idx = 0

    def _error(self, message: str, pos: int) -> ModelSyntaxError:
        return ModelSyntaxError(message, self.line, self.col0 + pos + 1)

    def _scan(self):
        t, i = self.text, 0
        while i < len(t):
            ch = t[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(t) and t[j].isdigit():
                    j += 1
                self.toks.append(("int", int(t[i:j]), i))
                i = j
            elif ch in _NAME_START:
                j = i
                while j < len(t) and t[j] in _NAME_CONT:
                    j += 1
                self.toks.append(("name", t[i:j], i))
                i = j
            elif ch in "+-*^":
                self.toks.append((ch, ch, i))
                i += 1
            else:
                raise self._error(f"unexpected character {ch!r}", i)
        self.toks.append(("end", None, len(t)))

    def peek(self):
        return self.toks[self.idx][0]

    def next(self):
        tok = self.toks[self.idx]
        self.idx += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise self._error(f"expected {kind}, found {tok[0]}", tok[2])
        return tok


def _parse_atom(toks: _Tokens, spec: GroupSpec) -> GroupElement:
    kind, name, pos = toks.expect("name")
    exponent = 1
    if toks.peek() == "^":
        toks.next()
        sign = 1
        if toks.peek() == "-":
            toks.next()
            sign = -1
        exponent = sign * toks.expect("int")[1]
    if name == "e":
        return spec.identity()
    if name not in spec.generators:
        raise toks._error(f"unknown generator {name!r}", pos)
    return spec.generator(name) ** exponent


def _parse_word(toks: _Tokens, spec: GroupSpec) -> GroupElement:
    el = _parse_atom(toks, spec)
    while True:
        if toks.peek() == "*":
            toks.next()
            el = el * _parse_atom(toks, spec)
        elif toks.peek() == "name":
            el = el * _parse_atom(toks, spec)
        else:
            return el


def _parse_term(toks: _Tokens, spec: GroupSpec) -> tuple[int, GroupElement]:
    if toks.peek() == "int":
        coeff = toks.next()[1]
        if toks.peek() == "*":
            toks.next()
            return coeff, _parse_word(toks, spec)
        if toks.peek() == "name":
            return coeff, _parse_word(toks, spec)
        return coeff, spec.identity()
    if toks.peek() == "name":
        return 1, _parse_word(toks, spec)
    tok = toks.next()
    raise toks._error(f"expected a term, found {tok[0]}", tok[2])


def parse_expression(text: str, spec: GroupSpec, line: int = 0,
                     col0: int = 0) -> RingElement:
    toks = _Tokens(text, line, col0)
    sign = 1
    if toks.peek() in "+-":
        sign = -1 if toks.next()[0] == "-" else 1
    out = RingElement.zero(spec)
    coeff, el = _parse_term(toks, spec)
    out = out + RingElement.monomial(spec, sign * coeff, el)
    while toks.peek() != "end":
        op = toks.next()
        if op[0] not in "+-":
            raise toks._error(f"expected '+' or '-', found {op[0]}", op[2])
        coeff, el = _parse_term(toks, spec)
        out = out + RingElement.monomial(spec, coeff if op[0] == "+" else -coeff, el)
    return out


def element_to_text(el: GroupElement) -> str:
    if el.is_identity:
        return "e"
    names = el.spec.generators
    return "*".join(names[i] if exp == 1 else f"{names[i]}^{exp}"
                    for i, exp in el.letters)


def expression_to_text(f: RingElement) -> str:
    """Canonical text form; a unit coefficient on a word is left implicit."""
    if f.is_zero:
        return "0"
    parts = []
    for el, coeff in f.terms():
        mag = abs(coeff)
        if el.is_identity:
            body = str(mag)
        elif mag == 1:
            body = element_to_text(el)
        else:
            body = f"{mag}*{element_to_text(el)}"
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if coeff > 0 else '-'} {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# model parsing


def _split_words(value: str) -> list[str]:
    return [w for w in value.replace(",", " ").split() if w]


def parse_model(text: str) -> Model:
    sections: dict[str, dict[str, tuple[str, int, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ModelSyntaxError("unterminated section header", lineno, 1)
            name = stripped[1:-1].strip()
            if name not in _SECTIONS:
                raise ModelSyntaxError(f"unknown section [{name}]", lineno, 1)
            if name in sections:
                raise ModelSyntaxError(f"duplicate section [{name}]", lineno, 1)
            sections[name] = {}
            current = name
            continue
        if current is None:
            raise ModelSyntaxError("content before any section header", lineno, 1)
        if "=" not in line:
            raise ModelSyntaxError("expected 'key = value'", lineno, 1)
        key, _, value = line.partition("=")
        key_s = key.strip()
        if not key_s:
            raise ModelSyntaxError("empty key", lineno, 1)
        if key_s in sections[current]:
            raise ModelSyntaxError(f"duplicate key {key_s!r}", lineno, 1)
        sections[current][key_s] = (value.strip(), lineno, len(key) + 2)

    def take(section: str, key: str, required: bool = True):
        sec = sections.get(section, {})
        if key not in sec:
            if required:
                raise ModelSyntaxError(f"missing key {key!r} in [{section}]", 0, 0)
            return None
        return sec.pop(key)

    if "group" not in sections:
        raise ModelSyntaxError("missing [group] section", 0, 0)
    if "matrix" not in sections:
        raise ModelSyntaxError("missing [matrix] section", 0, 0)

    kind_v = take("group", "kind")
    gens_v = take("group", "generators")
    kind = kind_v[0]
    if kind not in (FREE, FREE_ABELIAN):
        raise ModelSyntaxError(f"unknown group kind {kind!r}", kind_v[1], 1)
    names = _split_words(gens_v[0])
    if not names:
        raise ModelSyntaxError("empty generator list", gens_v[1], 1)
    try:
        spec = GroupSpec(kind, tuple(names))
    except ValueError as exc:
        raise ModelSyntaxError(str(exc), gens_v[1], 1) from None

    oracle: OrderOracle | None = None
    if "order" in sections:
        okind_v = take("order", "kind")
        okind = okind_v[0]
        if okind == "none":
            pass
        elif okind == "homomorphism":
            weights_v = take("order", "weights")
            weights = {}
            for item in _split_words(weights_v[0]):
                name, colon, val = item.partition(":")
                if not colon:
                    raise ModelSyntaxError(
                        f"weight {item!r} is not of the form name:integer",
                        weights_v[1], 1)
                try:
                    weights[name] = int(val)
                except ValueError:
                    raise ModelSyntaxError(
                        f"weight {item!r} has a non-integer value",
                        weights_v[1], 1) from None
            try:
                oracle = HomomorphismOrder.from_weights(spec, weights)
            except ValueError as exc:
                raise ModelSyntaxError(str(exc), weights_v[1], 1) from None
        elif okind == "semigroup":
            gens = take("order", "generators", required=False)
            if gens is None:
                elements = tuple(spec.generator(name) for name in spec.generators)
            else:
                elements = tuple(
                    _parse_word(_Tokens(word, gens[1], gens[2]), spec)
                    for word in _split_words(gens[0]))
            try:
                oracle = SemigroupOrder(spec, elements)
            except ValueError as exc:
                raise ModelSyntaxError(str(exc), gens[1] if gens else okind_v[1],
                                       1) from None
        else:
            raise ModelSyntaxError(f"unknown order kind {okind!r}", okind_v[1], 1)

    n_v = take("matrix", "n")
    try:
        n = int(n_v[0])
    except ValueError:
        raise ModelSyntaxError(f"n must be an integer, got {n_v[0]!r}",
                               n_v[1], 1) from None
    if n < 1:
        raise ModelSyntaxError("n must be >= 1", n_v[1], 1)
    entries = {}
    missing = []
    for k in range(1, n + 1):
        for m in range(1, n + 1):
            ent = take("matrix", f"entry.{k}.{m}", required=False)
            if ent is None:
                missing.append(f"entry.{k}.{m}")
                continue
            entries[(k - 1, m - 1)] = parse_expression(ent[0], spec, ent[1], ent[2])
    if missing:
        raise ModelSyntaxError("missing matrix entries: " + ", ".join(missing), 0, 0)

    options = {}
    if "options" in sections:
        for key, (value, _, _) in sections["options"].items():
            options[key] = value
        sections["options"].clear()

    for name in ("group", "order", "matrix"):
        leftovers = sections.get(name, {})
        if leftovers:
            key = next(iter(leftovers))
            raise ModelSyntaxError(f"unknown key {key!r} in [{name}]",
                                   leftovers[key][1], 1)

    return Model(group=spec, oracle=oracle, n=n, entries=entries, options=options)


def emit_model(model: Model) -> str:
    lines = ["[group]",
             f"kind = {model.group.kind}",
             "generators = " + " ".join(model.group.generators),
             ""]
    if model.oracle is not None:
        lines.append("[order]")
        if isinstance(model.oracle, HomomorphismOrder):
            lines.append("kind = homomorphism")
            lines.append("weights = " + " ".join(
                f"{name}:{model.oracle.weights[i]}"
                for i, name in enumerate(model.group.generators)))
        elif isinstance(model.oracle, SemigroupOrder):
            lines.append("kind = semigroup")
            lines.append("generators = " + " ".join(
                element_to_text(el) for el in model.oracle.positive_generators))
        else:
            raise TypeError(f"cannot emit oracle {type(model.oracle).__name__}")
        lines.append("")
    lines.append("[matrix]")
    lines.append(f"n = {model.n}")
    for k in range(model.n):
        for m in range(model.n):
            lines.append(f"entry.{k + 1}.{m + 1} = "
                         + expression_to_text(model.entries[(k, m)]))
    if model.options:
        lines.append("")
        lines.append("[options]")
        for key in sorted(model.options):
            lines.append(f"{key} = {model.options[key]}")
    return "\n".join(lines) + "\n"
