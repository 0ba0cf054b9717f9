"""Classify the 2x2 free-group pair and certify an inverse for the two-sided one.

Run from the repository root:

    python3 scripts/worked_pair.py
"""
import pathlib
import sys
import time
from fractions import Fraction

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from lopact import (  # noqa: E402
    classify_positive,
    contraction_ratio,
    decompose,
    normalized_decomposition,
    parse_model,
    residual,
    symbol_alphabet,
    truncated_inverse,
)

MODELS = pathlib.Path(__file__).resolve().parents[1] / "models"


def describe(name: str) -> None:
    model = parse_model((MODELS / f"{name}.model").read_text())
    d = decompose(model.matrix())
    row, col = classify_positive(d, model.oracle)
    print(f"{name}:")
    print(f"  lopsided      row={d.row_lopsided} column={d.column_lopsided}")
    print(f"  diagonal      {d.m_coeffs}")
    print(f"  alphabet      {symbol_alphabet(d).sizes}")
    print(f"  norms         row={d.f.norm_row()} column={d.f.norm_column()}")
    print(f"  positive      row={row.name} column={col.name}")


def invert_two_sided() -> None:
    model = parse_model((MODELS / "free_both.model").read_text())
    dn = normalized_decomposition(decompose(model.matrix()))
    print("free_both, normalized:")
    print(f"  column ratio  {contraction_ratio(dn, 'column')}")
    print(f"  row ratio     {contraction_ratio(dn, 'row')}")
    t0 = time.perf_counter()
    inv = truncated_inverse(dn, Fraction(1, 4), "column", prune_threshold=0)
    took = time.perf_counter() - t0
    print(f"  eps 1/4       depth={inv.depth} support={inv.approx.support_size()}"
          f" tail={float(inv.tail_bound):.4f} ({took:.2f}s)")
    print(f"  residual      {float(residual(dn.f, inv)):.4f}")


if __name__ == "__main__":
    describe("free_row")
    describe("free_both")
    invert_two_sided()
