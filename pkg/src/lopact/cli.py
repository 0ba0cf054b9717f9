"""Command dispatch and deterministic report emission.

Reports are flat ``key=value`` lines with a fixed key order, no timestamps,
and every rational rendered as ``numerator/denominator (~decimal)``; a
rerun with the same model file and flags is byte-identical.  Exit codes:
0 for a completed run (negative outcomes are part of the report), 1 for
usage or model-file errors, 2 when an internal invariant fails.

Commands operate on the normalized matrix (diagonal made positive and
moved to the identity by a monomial unit) whenever symbolic-cover objects
are involved; the unit changes no norm, no alphabet, and no membership
verdict, and the ``normalized`` report field records whether it was
applied.
"""
from __future__ import annotations

import argparse
import hashlib
import sys
from fractions import Fraction
from pathlib import Path

from .dynamics import SymbolMeasure, Window, homoclinic_image, sample_configuration
from .errors import (
    InvariantFailureError,
    LopactError,
    ModelSyntaxError,
    NotLopsidedError,
)
from .group import GroupElement
from .inverse import adjoint_inverse, residual, truncated_inverse
from .lopsided import decompose, normalized_decomposition, classify_positive
from .model import Model, element_to_text, expression_to_text, parse_model
from .parallel import worker_count
from .ring import COLUMN, ROW, RingElement
from .verify import (
    BOUNDARY_OPEN,
    FULL,
    Member,
    classify_collision,
    collision_search,
    decide_membership,
    defect_height,
    empirical_fourier,
    empirical_fourier_bound,
    haar_fourier,
)

COMMANDS = ("classify", "invert", "map", "verify-haar", "verify-collisions")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="lopact",
                description="Group-ring matrix classification, certified "
                            "inversion, and cover-map verification.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("model", help="path to a model file")
        sp.add_argument("--out", help="write the report here instead of stdout")

    sp = sub.add_parser("classify", help="lopsidedness flags, norms, alphabet")
    common(sp)

    sp = sub.add_parser("invert", help="certified truncated inverse")
    common(sp)
    sp.add_argument("--eps", help="target tail bound, e.g. 1/1000")
    sp.add_argument("--prune", help="pointwise pruning threshold")

    sp = sub.add_parser("map", help="cover-map image of a sampled configuration")
    common(sp)
    sp.add_argument("--coords", help="comma list of word[:component] coordinates")
    sp.add_argument("--window", help="window ball radius")
    sp.add_argument("--eps", help="target tail bound for the inverse")
    sp.add_argument("--seed", help="sampling seed")

    sp = sub.add_parser("verify-haar", help="Fourier dichotomy table")
    common(sp)
    sp.add_argument("--trials", help="Monte Carlo sample count")
    sp.add_argument("--seed", help="sampling seed")
    sp.add_argument("--window", help="window ball radius")
    sp.add_argument("--eps", help="target tail bound for the inverse")

    sp = sub.add_parser("verify-collisions", help="cover-map collision search")
    common(sp)
    sp.add_argument("--window", help="window ball radius")
    sp.add_argument("--height", help="search box height N")
    sp.add_argument("--boundary-open", action="store_true",
                    help="enforce only window-determined coordinates")
    sp.add_argument("--eps", help="tail bound when the height is computed")
    return p


# ---------------------------------------------------------------------------
# rendering


def _rat(x) -> str:
    fr = Fraction(x)
    if fr.denominator == 1:
        return str(fr.numerator)
    return f"{fr.numerator}/{fr.denominator} (~{float(fr)!r})"


def _opt(model: Model, args, name: str, fallback=None):
    value = getattr(args, name.replace("-", "_"), None)
    if value is None:
        value = model.option(name, fallback)
    return value


def _need_int(model, args, name, fallback=None) -> int:
    value = _opt(model, args, name, fallback)
    if value is None:
        raise _UsageError(f"--{name} is required (flag or [options] key)")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise _UsageError(f"--{name} must be an integer, got {value!r}") from None


def _need_fraction(model, args, name, fallback=None) -> Fraction:
    value = _opt(model, args, name, fallback)
    if value is None:
        raise _UsageError(f"--{name} is required (flag or [options] key)")
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"--{name} must be a rational, got {value!r}") from None


class Report:
    def __init__(self):
        self.lines: list[str] = []

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}={value}")

    def render(self) -> str:
        return "\n".join(self.lines) + "\n"


def _header(rep: Report, command: str, model: Model, text: str) -> None:
    rep.add("command", command)
    rep.add("model-sha256", hashlib.sha256(text.encode()).hexdigest())
    rep.add("group", f"{model.group.kind}({','.join(model.group.generators)})")
    rep.add("order", model.oracle.describe() if model.oracle else "none")
    rep.add("n", model.n)


# ---------------------------------------------------------------------------
# commands


def _cmd_classify(rep: Report, model: Model, args) -> None:
    f = model.matrix()
    d = decompose(f)
    for k in range(model.n):
        for m in range(model.n):
            rep.add(f"entry.{k + 1}.{m + 1}", expression_to_text(f.entry(k, m)))
    rep.add("row-lopsided", str(d.row_lopsided).lower())
    rep.add("column-lopsided", str(d.column_lopsided).lower())
    for k in range(model.n):
        rep.add(f"m.{k + 1}",
                expression_to_text(RingElement.monomial(
                    model.group, d.m_coeffs[k], d.m_elems[k])))
    rep.add("alphabet", "x".join(str(s) for s in d.m_abs))
    rep.add("row-sums", ",".join(_rat(s) for s in d.row_sums()))
    rep.add("column-sums", ",".join(_rat(s) for s in d.column_sums()))
    rep.add("norm-row", _rat(f.norm_row()))
    rep.add("norm-column", _rat(f.norm_column()))
    if model.oracle is not None:
        row_pos, col_pos = classify_positive(d, model.oracle)
        rep.add("positive-row", row_pos.name.lower())
        rep.add("positive-column", col_pos.name.lower())
    else:
        rep.add("positive-row", "unchecked")
        rep.add("positive-column", "unchecked")
    rep.add("normalized", str(d.is_normalized).lower())
    rep.add("alternatives", sum(len(a) for a in d.alternatives))


def _pick_side(d) -> str:
    if d.column_lopsided:
        return COLUMN
    if d.row_lopsided:
        return ROW
    raise NotLopsidedError("the matrix is not lopsided on either side")


def _cmd_invert(rep: Report, model: Model, args) -> None:
    d = decompose(model.matrix())
    dn = normalized_decomposition(d)
    eps = _need_fraction(model, args, "eps", "1/1000")
    prune_raw = _opt(model, args, "prune")
    prune = Fraction(str(prune_raw)) if prune_raw is not None else None
    side = _pick_side(dn)
    rep.add("eps", _rat(eps))
    rep.add("side", side)
    rep.add("normalized", str(d.is_normalized).lower())
    inv = truncated_inverse(dn, eps, side, prune_threshold=prune)
    res = residual(dn.f, inv)
    rep.add("ratio", _rat(inv.ratio))
    rep.add("depth", inv.depth)
    rep.add("support", inv.approx.support_size())
    rep.add("tail-bound", _rat(inv.tail_bound))
    rep.add("pruned-mass", _rat(inv.pruned_mass))
    rep.add("residual-norm", _rat(res))
    floor = res / dn.f.norm(side)
    if inv.tail_bound < floor:
        raise InvariantFailureError(
            f"tail bound {inv.tail_bound} is below the residual floor {floor}")
    rep.add("residual-check", "pass")


def _parse_coords(raw: str, model: Model) -> list[tuple[GroupElement, int]]:
    from .model import _Tokens, _parse_word  # shared expression tokenizer

    coords = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        word, colon, comp = item.partition(":")
        el = (model.group.identity() if word.strip() == "e"
              else _parse_word(_Tokens(word.strip(), 0, 0), model.group))
        if colon:
            k = int(comp)
            if not 1 <= k <= model.n:
                raise _UsageError(f"component {k} out of range 1..{model.n}")
            coords.append((el, k - 1))
        else:
            coords.extend((el, k) for k in range(model.n))
    if not coords:
        raise _UsageError("--coords named no coordinates")
    return coords


def _cmd_map(rep: Report, model: Model, args) -> None:
    d = decompose(model.matrix())
    dn = normalized_decomposition(d)
    eps = _need_fraction(model, args, "eps", "1/1000")
    radius = _need_int(model, args, "window")
    seed = _need_int(model, args, "seed", 0)
    coords = _parse_coords(_opt(model, args, "coords", "e"), model)
    rep.add("window", radius)
    rep.add("seed", seed)
    rep.add("eps", _rat(eps))
    rep.add("normalized", str(d.is_normalized).lower())
    if not dn.row_lopsided:
        raise NotLopsidedError(
            "the cover map needs a row lopsided matrix (column certificate "
            "for the adjoint inverse)")
    inv = adjoint_inverse(truncated_inverse(dn, eps, ROW))
    window = Window.ball(model.group, radius)
    y = sample_configuration(SymbolMeasure.uniform(dn.m_abs), window, seed)
    rep.add("tail-bound", _rat(inv.tail_bound))
    rep.add("y", " ".join(
        f"{element_to_text(el)}:{','.join(str(v) for v in vec)}"
        for el, vec in zip(y.window, y.values)))
    x = homoclinic_image(y, inv, coords)
    for (el, k), (value, err) in x.items():
        rep.add(f"coord.{element_to_text(el)}.{k + 1}",
                f"{_rat(value)} err={_rat(err)}")


def _haar_battery(dn) -> list[tuple[str, tuple[RingElement, ...]]]:
    spec = dn.spec
    rows = []
    for k in range(dn.n):
        member = tuple(dn.f.entry(k, m) for m in range(dn.n))
        unit = tuple(RingElement.one(spec) if m == k else RingElement.zero(spec)
                     for m in range(dn.n))
        mixed = tuple(a + b for a, b in zip(member, unit))
        rows.append((f"member.{k + 1}", member))
        rows.append((f"unit.{k + 1}", unit))
        rows.append((f"mixed.{k + 1}", mixed))
    return rows


def _cmd_verify_haar(rep: Report, model: Model, args) -> None:
    d = decompose(model.matrix())
    dn = normalized_decomposition(d)
    eps = _need_fraction(model, args, "eps", "1/1000")
    trials = _need_int(model, args, "trials", 1000)
    seed = _need_int(model, args, "seed", 0)
    radius = _need_int(model, args, "window", 8)
    rep.add("trials", trials)
    rep.add("seed", seed)
    rep.add("window", radius)
    rep.add("eps", _rat(eps))
    rep.add("threads", worker_count())
    rep.add("normalized", str(d.is_normalized).lower())
    side = _pick_side(dn)
    inv = truncated_inverse(dn, eps, side)
    measure = SymbolMeasure.uniform(dn.m_abs)
    window = Window.ball(model.group, radius)
    for label, h in _haar_battery(dn):
        try:
            verdict = decide_membership(h, dn, inv)
            value, err = haar_fourier(h, dn, inv, measure)
            emp = empirical_fourier(h, dn, inv, measure, trials, window, seed)
            bound = empirical_fourier_bound(h, dn, inv)
        except LopactError as exc:
            rep.add(f"row.{label}.error", exc)
            continue
        if isinstance(verdict, Member):
            rep.add(f"row.{label}.verdict", "member")
            rep.add(f"row.{label}.witness", "-")
        else:
            w = verdict.witness
            rep.add(f"row.{label}.verdict", "non-member")
            rep.add(f"row.{label}.witness",
                    f"{element_to_text(w.element)}:{w.k + 1}:{w.j} "
                    f"value={_rat(w.value)} err={_rat(w.err)}")
        if err == 0 and value.imag == 0 and value.real in (0.0, 1.0):
            rep.add(f"row.{label}.haar", int(value.real))
        else:
            rep.add(f"row.{label}.haar",
                    f"{value.real!r},{value.imag!r} err={err!r}")
        rep.add(f"row.{label}.empirical", f"{emp.real!r},{emp.imag!r}")
        rep.add(f"row.{label}.empirical-abs", repr(abs(emp)))
        rep.add(f"row.{label}.systematic", f"2pi*{_rat(bound)}")


def _cmd_verify_collisions(rep: Report, model: Model, args) -> None:
    d = decompose(model.matrix())
    dn = normalized_decomposition(d)
    radius = _need_int(model, args, "window")
    mode = BOUNDARY_OPEN if getattr(args, "boundary_open", False) else FULL
    height_raw = _opt(model, args, "height")
    rep.add("window", radius)
    rep.add("mode", mode)
    rep.add("threads", worker_count())
    rep.add("normalized", str(d.is_normalized).lower())
    window = Window.ball(model.group, radius)
    if height_raw is not None:
        height = int(height_raw)
        rep.add("height", height)
        rep.add("height-source", "given")
    else:
        eps = _need_fraction(model, args, "eps", "1/1000")
        if not dn.row_lopsided:
            raise NotLopsidedError(
                "computing the height needs a row lopsided matrix; "
                "pass --height explicitly")
        inv = adjoint_inverse(truncated_inverse(dn, eps, ROW))
        height = defect_height(dn, inv)
        rep.add("height", height)
        rep.add("height-source", f"computed at eps {_rat(eps)}")
    result = collision_search(dn, window, height, mode)
    rep.add("complete", str(result.complete).lower())
    rep.add("nodes", result.nodes)
    rep.add("count", len(result))
    for i, col in enumerate(result, start=1):
        labels = classify_collision(col, dn)
        c_txt = ",".join(
            f"{element_to_text(el)}:{m + 1}:{vec[m]}"
            for el, vec in zip(col.window, col.c)
            for m in range(len(vec)) if vec[m])
        y_txt = ",".join(
            f"{element_to_text(s)}:{k + 1}:[{lo},{hi}]"
            for (s, k), (lo, hi) in sorted(
                col.intervals.items(),
                key=lambda kv: (kv[0][0].sort_key(), kv[0][1]))
            if s in col.window)
        lab_txt = ",".join(
            f"{'+' if lab.sign > 0 else '-'}{lab.j}@{element_to_text(lab.element)}"
            f":{lab.k + 1}:L{lab.l_b}"
            for lab in labels) or "-"
        rep.add(f"collision.{i}", f"c{{{c_txt}}} y{{{y_txt}}} labels{{{lab_txt}}}")


_DISPATCH = {
    "classify": _cmd_classify,
    "invert": _cmd_invert,
    "map": _cmd_map,
    "verify-haar": _cmd_verify_haar,
    "verify-collisions": _cmd_verify_collisions,
}


def run(command: str, model: Model, args, text: str) -> Report:
    """Build the report for one command; negative outcomes are rendered,
    invariant failures propagate."""
    rep = Report()
    _header(rep, command, model, text)
    body = Report()
    try:
        _DISPATCH[command](body, model, args)
    except InvariantFailureError:
        raise
    except _UsageError:
        raise
    except LopactError as exc:
        rep.add("status", "error")
        rep.add("error", exc)
        for attr in ("reason", "depth", "achieved_bound", "pruned_mass", "support"):
            value = getattr(exc, attr, None)
            if value is not None:
                key = attr.replace("_", "-")
                rep.add(f"error-{key}",
                        _rat(value) if isinstance(value, Fraction) else value)
        rep.lines.extend(body.lines)
        return rep
    rep.add("status", "ok")
    rep.lines.extend(body.lines)
    return rep


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        text = Path(args.model).read_text()
    except OSError as exc:
        print(f"cannot read model: {exc}", file=sys.stderr)
        return 1
    try:
        model = parse_model(text)
    except ModelSyntaxError as exc:
        print(f"model error: {args.model}:{exc.line}:{exc.column}: {exc.message}",
              file=sys.stderr)
        return 1
    try:
        report = run(args.command, model, args, text)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except InvariantFailureError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 2
    rendered = report.render()
    if args.out:
        Path(args.out).write_text(rendered)
    else:
        sys.stdout.write(rendered)
    return 0


if __name__ == "__main__":
    sys.exit(main())
