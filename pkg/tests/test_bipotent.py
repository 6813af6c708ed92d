from fractions import Fraction

import pytest
from hypothesis import given
from strategies import bipotent_elements

from supertropical.bipotent import (
    ONE,
    ZERO,
    BipotentElem,
    bp_add,
    bp_divide,
    bp_inverse,
    bp_leq,
    bp_mul,
    bp_pow,
    bp_sum,
    parse_bipotent,
    parse_rational,
    render_bipotent,
)
from supertropical.errors import DomainError, ParseError


def value(q):
    return BipotentElem.of(q)


@pytest.mark.parametrize(
    ("x", "y", "expected"),
    [
        (value(3), value(5), value(5)),
        (ZERO, value("-7/2"), value("-7/2")),
        (value(2), value(2), value(2)),
    ],
)
def test_add_is_max(x, y, expected):
    assert bp_add(x, y) == expected


@pytest.mark.parametrize(
    ("x", "y", "expected"),
    [
        (value(3), value(5), value(8)),
        (value("1/2"), value("-1/2"), ONE),
        (value(4), ZERO, ZERO),
    ],
)
def test_mul_adds_values(x, y, expected):
    assert bp_mul(x, y) == expected


def test_inverse():
    assert bp_inverse(value(3)) == value(-3)
    assert bp_inverse(ONE) == ONE
    with pytest.raises(DomainError):
        bp_inverse(ZERO)


def test_divide_and_pow():
    assert bp_divide(value(5), value(2)) == value(3)
    assert bp_pow(value("3/2"), 4) == value(6)
    assert bp_pow(ZERO, 0) == ONE
    assert bp_pow(ZERO, 3) == ZERO
    assert bp_pow(value(2), -2) == value(-4)


def test_sum():
    assert bp_sum([]) == ZERO
    assert bp_sum([value(1), ZERO, value(-4), value(3)]) == value(3)


def test_order_and_operators():
    assert ZERO < value(-1000) < ONE < value("1/3")
    assert value(1) + value(2) == value(2)
    assert value(1) * value(2) == value(3)
    assert value(2) ** 3 == value(6)
    assert sorted([value(2), ZERO, value(-1)]) == [ZERO, value(-1), value(2)]


@pytest.mark.parametrize(
    ("text", "expected"),
    [("6/4", Fraction(3, 2)), ("-7", Fraction(-7)), (" +3/9 ", Fraction(1, 3)), ("0", Fraction(0))],
)
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize(
    ("text", "position"),
    [("abc", 0), ("1/0", 2), ("3/4x", 3), ("  1.5", 3)],
)
def test_parse_rational_errors(text, position):
    with pytest.raises(ParseError) as e:
        parse_rational(text)
    assert e.value.position == position
    assert e.value.text == text


def test_parse_and_render():
    assert parse_bipotent("-inf") == ZERO
    assert parse_bipotent("-7/2") == value("-7/2")
    assert render_bipotent(ZERO) == "-inf"
    assert render_bipotent(value("10/4")) == "5/2"
    assert repr(ZERO) == "Zero"
    assert repr(value(-3)) == "Value(-3)"
    assert str(value(0)) == "0"


@given(bipotent_elements, bipotent_elements, bipotent_elements)
def test_semifield_laws(x, y, z):
    assert x + (y + z) == (x + y) + z
    assert x * (y * z) == (x * y) * z
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x + ZERO == x
    assert x * ONE == x
    assert x * ZERO == ZERO


@given(bipotent_elements, bipotent_elements)
def test_bipotent_and_total_order(x, y):
    assert bp_add(x, y) in (x, y)
    assert bp_leq(x, y) or bp_leq(y, x)
    assert bp_leq(ZERO, x)


@given(bipotent_elements)
def test_render_round_trip(x):
    assert parse_bipotent(render_bipotent(x)) == x
