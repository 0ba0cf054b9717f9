"""End-to-end tour of the 3 - t system: exact inverse, cover map, carry chains.

Run from the repository root:

    python3 scripts/carry_chain.py
"""
import pathlib
import sys
from fractions import Fraction

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from lopact import (  # noqa: E402
    RingElement,
    SymbolMeasure,
    Window,
    adjoint_inverse,
    classify_collision,
    collision_search,
    decide_membership,
    decompose,
    defect_height,
    haar_fourier,
    homoclinic_image,
    parse_model,
    sample_configuration,
    truncated_inverse,
)

MODELS = pathlib.Path(__file__).resolve().parents[1] / "models"


def main() -> None:
    model = parse_model((MODELS / "three_minus_t.model").read_text())
    f = model.matrix()
    d = decompose(f)
    spec = model.group
    t = spec.generator("t")

    inv = truncated_inverse(d, Fraction(1, 1000), "column", prune_threshold=0)
    print(f"inverse: depth={inv.depth} tail={inv.tail_bound}")
    q = inv.approx.entry(0, 0)
    print("coefficients:", [str(q.coefficient(t**lv)) for lv in range(inv.depth + 1)])

    uniform = SymbolMeasure.uniform((3,))
    for label, h in (("3-t", f.entry(0, 0)), ("1", RingElement.one(spec))):
        verdict = decide_membership((h,), f, inv)
        val, _ = haar_fourier((h,), f, inv, uniform)
        print(f"h={label}: {type(verdict).__name__} fourier={val}")

    adj = adjoint_inverse(truncated_inverse(d, Fraction(1, 1000), "row",
                                            prune_threshold=0))
    print(f"defect height: {defect_height(d, adj)}")

    y = sample_configuration(uniform, Window.ball(spec, 6),
                             seed=int(model.option("seed", "0")))
    x = homoclinic_image(y, adj, [(spec.identity(), 0), (t, 0)])
    for (s, k), (value, err) in x.items():
        print(f"phi(y) at {s}: {value} (err {err})")

    full = collision_search(d, Window.ball(spec, 8), 2, mode="full")
    print(f"full-mode collisions on [-8,8], height 2: {len(full)}")
    open_mode = collision_search(d, Window.ball(spec, 8), 2, mode="boundary-open")
    print(f"boundary-open collisions: {len(open_mode)}")
    sample = next(col for col in open_mode
                  if all(col.c_value(t**i, 0) == 1 for i in range(1, 9)))
    print("carry chain c=1 on t..t^8:")
    print(f"  y at e constrained to {sample.intervals[(spec.identity(), 0)]}")
    for lab in classify_collision(sample, d)[:2]:
        print(f"  label {lab.sign:+d} at {lab.element}: L_B={lab.l_b} "
              f"y-range={lab.y_range}")


if __name__ == "__main__":
    main()
