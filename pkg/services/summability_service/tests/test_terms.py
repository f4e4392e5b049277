from fractions import Fraction

import pytest

from app.errors import SpecSyntaxError
from app.terms import (
    Const,
    LimitKind,
    Monotonicity,
    Poly,
    PolyRatio,
    compare_eventually,
    compare_shifted,
    eventual_sign,
    first_zero,
    is_identically_zero,
    parse_term,
    tail_class,
)


@pytest.mark.parametrize("text", ["2n + 1", "1/n^2", "-1/n", "abs(n - 5)", "max(1/n, 1/2)", "(n + 1)/(n^2 + 1)"])
def test_render_reparses_to_same_tree(text):
    term = parse_term(text)
    assert parse_term(term.render()) == term


def test_implicit_multiplication_and_folding():
    assert parse_term("2n").eval(7) == 14
    assert parse_term("3(n+1)").eval(2) == 9
    assert parse_term("2^-1") == Const(Fraction(1, 2))
    assert parse_term("1/2 + 1/3") == Const(Fraction(5, 6))


def test_eval_is_exact():
    assert parse_term("1/n - 1/(n+1)").eval(3) == Fraction(1, 12)
    assert parse_term("min(n, 10) - max(n, 10)").eval(4) == -6


def test_denominator_vanishing_is_rejected():
    with pytest.raises(SpecSyntaxError) as info:
        parse_term("1/(n-3)")
    assert "vanishes at n = 3" in str(info.value)


@pytest.mark.parametrize(
    "text, column",
    [("n $", 3), ("n +", 4), ("(n", 3), ("n^x", 3)],
)
def test_parse_errors_carry_columns(text, column):
    with pytest.raises(SpecSyntaxError) as info:
        parse_term(text)
    assert f"column {column}:" in str(info.value)


def test_exponent_cap():
    with pytest.raises(SpecSyntaxError):
        parse_term("n^100")


def test_first_zero():
    assert first_zero(parse_term("n^2 - 5n + 6")) == 2
    assert first_zero(parse_term("n + 1")) is None
    assert first_zero(parse_term("abs(n - 4) - 1")) == 3


def test_eventual_sign():
    assert eventual_sign(PolyRatio.of(Poly((Fraction(-3), Fraction(1))))) == (4, 1)
    assert eventual_sign(PolyRatio.of(Poly(()))) == (1, 0)


def test_compare_shifted():
    assert compare_shifted(parse_term("1/n"), parse_term("1/n"))[1]
    assert compare_shifted(parse_term("1/n"), parse_term("1/(n+1)"))[1]
    assert not compare_shifted(parse_term("n"), parse_term("n"))[1]
    assert compare_shifted(parse_term("n"), parse_term("n"), decreasing=False)[1]
    assert not compare_shifted(parse_term("2/n"), parse_term("1/n"))[1]


def test_compare_eventually():
    assert compare_eventually(parse_term("1/n"), parse_term("1/2")) == (3, True)
    start, holds = compare_eventually(parse_term("n"), parse_term("100"))
    assert not holds and start == 101


def test_identically_zero():
    assert is_identically_zero(parse_term("n - n"))
    assert is_identically_zero(parse_term("max(n, 0) - n"))
    assert not is_identically_zero(parse_term("abs(n - 2) - (n - 2)"))


def test_tail_class_of_decreasing_term():
    tail = tail_class(parse_term("1/n"))
    assert tail.tends_to(0)
    assert tail.monotonicity is Monotonicity.NONINCREASING
    assert tail.nonincreasing


def test_tail_class_limits():
    assert tail_class(parse_term("(2n + 1)/(n + 1)")).tends_to(2)
    up = tail_class(parse_term("n^2"))
    assert up.limit_kind is LimitKind.DIVERGES_UP and up.nondecreasing
    assert tail_class(parse_term("-n")).limit_kind is LimitKind.DIVERGES_DOWN
    constant = tail_class(parse_term("abs(n - 5) - n"))
    assert constant.tends_to(-5)
    assert constant.monotonicity is Monotonicity.CONSTANT
    assert constant.monotone_from == 6
