import textwrap

import pytest

from lopact import (
    GroupSpec,
    HomomorphismOrder,
    ModelSyntaxError,
    SemigroupOrder,
    emit_model,
    parse_expression,
    parse_model,
)
from lopact.model import expression_to_text

F = GroupSpec.free("a", "b")
A, B = F.generator("a"), F.generator("b")


# -- expressions --------------------------------------------------------------


def test_parse_worked_entries():
    f = parse_expression("7 - 2*a^3*b^2", F)
    assert f.coefficient(F.identity()) == 7
    assert f.coefficient(A**3 * B**2) == -2
    assert len(f.support()) == 2

    g = parse_expression("-10 - 3*a^8", F)
    assert g.coefficient(F.identity()) == -10
    assert g.coefficient(A**8) == -3


def test_parse_zero_and_identity():
    assert parse_expression("0", F).is_zero
    assert parse_expression("4*e", F).coefficient(F.identity()) == 4


def test_parse_bare_word_and_juxtaposition():
    assert parse_expression("b^7*a", F) == parse_expression("1*b^7*a", F)
    assert parse_expression("3a + b^7a", F) == parse_expression("3*a + 1*b^7*a", F)


def test_parse_collects_like_terms():
    f = parse_expression("2*a + 3*a - 5*a", F)
    assert f.is_zero


def test_parse_negative_exponents():
    f = parse_expression("8*a^-1", F)
    assert f.coefficient(A**-1) == 8


def test_parse_errors_carry_position():
    with pytest.raises(ModelSyntaxError) as info:
        parse_expression("3*q", F)
    assert info.value.column == 3
    with pytest.raises(ModelSyntaxError):
        parse_expression("3 +", F)
    with pytest.raises(ModelSyntaxError):
        parse_expression("a^", F)


def test_expression_round_trip():
    for text in ("7 - 2*a^3*b^2", "3*a + b^7*a", "-10 - 3*a^8", "0",
                 "8*a^-1 - 2*a^3*b^2*a^-1"):
        f = parse_expression(text, F)
        assert parse_expression(expression_to_text(f), F) == f


def test_unit_coefficients_render_bare():
    f = parse_expression("1*a - 1*b + 2*e", F)
    assert expression_to_text(f) == "2 + a - b"


# -- model files --------------------------------------------------------------

CARRY = textwrap.dedent("""\
    [group]
    kind = free-abelian
    generators = t

    [order]
    kind = homomorphism
    weights = t:1

    [matrix]
    n = 1
    entry.1.1 = 3 - t

    [options]
    eps = 1/1000
    """)


def test_parse_model_carry():
    m = parse_model(CARRY)
    assert m.n == 1
    assert isinstance(m.oracle, HomomorphismOrder)
    t = m.group.generator("t")
    assert m.entries[(0, 0)].coefficient(t) == -1
    assert m.options == {"eps": "1/1000"}


def test_parse_model_semigroup_defaults():
    text = CARRY.replace("kind = homomorphism\nweights = t:1",
                         "kind = semigroup")
    m = parse_model(text)
    assert isinstance(m.oracle, SemigroupOrder)
    assert m.oracle.describe() == "semigroup<t>"


def test_parse_model_order_none():
    text = CARRY.replace("kind = homomorphism\nweights = t:1", "kind = none")
    assert parse_model(text).oracle is None


def test_model_round_trip():
    m = parse_model(CARRY)
    again = parse_model(emit_model(m))
    assert again.entries == m.entries
    assert again.options == m.options
    assert again.group == m.group
    assert type(again.oracle) is type(m.oracle)


def test_model_files_round_trip():
    import pathlib

    for name in ("free_row", "free_both", "three_minus_t"):
        path = pathlib.Path(__file__).resolve().parents[1] / "models" / f"{name}.model"
        m = parse_model(path.read_text())
        again = parse_model(emit_model(m))
        assert again.entries == m.entries


def test_missing_entry_reported():
    text = CARRY.replace("entry.1.1 = 3 - t", "")
    with pytest.raises(ModelSyntaxError) as info:
        parse_model(text)
    assert "entry.1.1" in str(info.value)


def test_unknown_key_rejected():
    # [options] is free-form, but the structured sections are not.
    with pytest.raises(ModelSyntaxError) as info:
        parse_model(CARRY.replace("[options]", "whatever = 1\n\n[options]"))
    assert "whatever" in str(info.value)


def test_extra_option_keys_are_kept():
    m = parse_model(CARRY + "\nnote = anything goes\n")
    assert m.option("note") == "anything goes"


def test_duplicate_key_rejected():
    with pytest.raises(ModelSyntaxError) as info:
        parse_model(CARRY + "\n[matrix]\nn = 1\n")
    assert info.value.line > 0


def test_comments_and_blank_lines_ignored():
    noisy = "# header\n\n" + CARRY.replace("[matrix]", "[matrix]  # inline")
    assert parse_model(noisy).n == 1


def test_bad_n():
    with pytest.raises(ModelSyntaxError):
        parse_model(CARRY.replace("n = 1", "n = 0"))
