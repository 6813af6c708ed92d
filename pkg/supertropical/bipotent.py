"""Bipotent semifields M = Γ ∪ {0} over an ordered abelian group.

The value group Γ is fixed to the additive group of the rationals with its
usual order, written additively (max-plus):

=========================  ==========================
multiplicative notation    this module
=========================  ==========================
``x + y`` (= max)          ``bp_add``: ``max(x, y)``
``x · y``                  ``bp_mul``: ``x + y``
``1``                      ``Value(0)``
``0``                      ``Zero`` (rendered ``-inf``)
``x⁻¹``                    ``bp_inverse``: ``-x``
=========================  ==========================
"""
from __future__ import annotations

import functools
import re
import typing as t
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ParseError

#: An element of the value group Γ = (ℚ, +).
GroupValue = Fraction

RationalLike = t.Union[int, str, Fraction]

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")
ZERO_TEXT = "-inf"


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` into a canonical :class:`~fractions.Fraction`.

    >>> parse_rational("6/4")
    Fraction(3, 2)
    """
    stripped = text.strip()
    offset = len(text) - len(text.lstrip())
    match = _RATIONAL.match(stripped)
    if match is None:
        reason = "expected an integer or a fraction p/q"
        raise ParseError(reason, text, offset)
    if match.end() != len(stripped):
        reason = "unexpected trailing characters"
        raise ParseError(reason, text, offset + match.end())
    numerator, _, denominator = stripped.partition("/")
    if denominator and int(denominator) == 0:
        reason = "zero denominator"
        raise ParseError(reason, text, offset + stripped.index("/") + 1)
    return Fraction(int(numerator), int(denominator or 1))


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, a fraction or rational text to a reduced fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        msg = "booleans are not rationals"
        raise TypeError(msg)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    msg = f"cannot interpret {value!r} as an exact rational"
    raise TypeError(msg)


def render_rational(value: Fraction) -> str:
    """Render a fraction as ``p`` or ``p/q``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@functools.total_ordering
@dataclass(frozen=True)
class BipotentElem:
    """An element of M: ``Zero`` (``value is None``) or ``Value(g)``."""

    value: Fraction | None = None

    def __post_init__(self) -> None:
        if self.value is not None and not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", as_rational(self.value))

    @classmethod
    def zero(cls) -> BipotentElem:
        return cls(None)

    @classmethod
    def one(cls) -> BipotentElem:
        return cls(Fraction(0))

    @classmethod
    def of(cls, value: RationalLike) -> BipotentElem:
        return cls(as_rational(value))

    @property
    def is_zero(self) -> bool:
        return self.value is None

    def __add__(self, other: BipotentElem) -> BipotentElem:
        return bp_add(self, other)

    def __mul__(self, other: BipotentElem) -> BipotentElem:
        return bp_mul(self, other)

    def __pow__(self, exponent: int) -> BipotentElem:
        return bp_pow(self, exponent)

    def __lt__(self, other: BipotentElem) -> bool:
        if not isinstance(other, BipotentElem):
            return NotImplemented
        return self != other and bp_leq(self, other)

    def __str__(self) -> str:
        return render_bipotent(self)

    def __repr__(self) -> str:
        if self.value is None:
            return "Zero"
        return f"Value({render_rational(self.value)})"


ZERO = BipotentElem.zero()
ONE = BipotentElem.one()


def bp_add(x: BipotentElem, y: BipotentElem) -> BipotentElem:
    """Return ``max(x, y)``; always one of the two arguments."""
    if x.value is None:
        return y
    if y.value is None:
        return x
    return y if x.value <= y.value else x


def bp_mul(x: BipotentElem, y: BipotentElem) -> BipotentElem:
    if x.value is None or y.value is None:
        return ZERO
    return BipotentElem(x.value + y.value)


def bp_leq(x: BipotentElem, y: BipotentElem) -> bool:
    """``x ≤ y`` iff ``x + y = y``."""
    return bp_add(x, y) == y


def bp_inverse(x: BipotentElem) -> BipotentElem:
    if x.value is None:
        msg = "the zero of a bipotent semifield has no inverse"
        raise DomainError(msg)
    return BipotentElem(-x.value)


def bp_divide(x: BipotentElem, y: BipotentElem) -> BipotentElem:
    return bp_mul(x, bp_inverse(y))


def bp_pow(x: BipotentElem, exponent: int) -> BipotentElem:
    """Return ``x^k`` for ``k >= 0``; ``Zero^0`` is the unit."""
    if exponent < 0:
        return bp_pow(bp_inverse(x), -exponent)
    if exponent == 0:
        return ONE
    if x.value is None:
        return ZERO
    return BipotentElem(x.value * exponent)


def bp_sum(elements: t.Iterable[BipotentElem]) -> BipotentElem:
    return functools.reduce(bp_add, elements, ZERO)


def parse_bipotent(text: str) -> BipotentElem:
    """Parse ``-inf`` or a rational.

    >>> parse_bipotent("-inf")
    Zero
    >>> parse_bipotent("-7/2")
    Value(-7/2)
    """
    if text.strip() == ZERO_TEXT:
        return ZERO
    return BipotentElem(parse_rational(text))


def render_bipotent(x: BipotentElem) -> str:
    if x.value is None:
        return ZERO_TEXT
    return render_rational(x.value)
