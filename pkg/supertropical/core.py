"""The standard supertropical semifield U(Γ) = 𝒯 ∪̇ 𝒢 ∪̇ {0}.

Elements are ``Zero``, ``Tangible(g)`` or ``Ghost(g)`` with ``g`` in the value
group (ℚ, +). The unit is ``Tangible(0)`` and ``e = 1 + 1`` is ``Ghost(0)``.

Ghost surpassing
----------------
``x ⊨ y`` means ``x = y + z`` for some ``z`` in ``eU`` (a ghost or zero). Adding
``Ghost(h)`` to ``y`` leaves ``y`` unchanged when ``h < ev(y)`` and yields
``Ghost(h)`` otherwise, so the existential definition reduces to::

    x ⊨ y  ⟺  x = y, or x is a ghost with ev(x) ≥ ev(y)

where ``ev`` is the e-value (``ev(Zero) = -inf``). :func:`gs_geq` uses this
rule; :func:`gs_geq_by_search` is the literal existential check over a finite
candidate set and is kept as its oracle.
"""
from __future__ import annotations

import enum
import functools
import re
import typing as t
from dataclasses import dataclass
from fractions import Fraction

from .bipotent import ZERO as BP_ZERO
from .bipotent import BipotentElem, RationalLike, as_rational, render_rational
from .errors import DomainError, ParseError


class Tag(enum.Enum):
    ZERO = "0"
    TANGIBLE = "t"
    GHOST = "g"


@dataclass(frozen=True)
class SupertropicalElem:
    """One element of U(Γ); ``value`` is None exactly for ``Zero``."""

    tag: Tag
    value: Fraction | None = None

    def __post_init__(self) -> None:
        if (self.tag is Tag.ZERO) != (self.value is None):
            msg = f"{self.tag.name} element with value {self.value!r}"
            raise ValueError(msg)
        if self.value is not None and not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", as_rational(self.value))

    @classmethod
    def zero(cls) -> SupertropicalElem:
        return cls(Tag.ZERO)

    @classmethod
    def tangible(cls, value: RationalLike) -> SupertropicalElem:
        return cls(Tag.TANGIBLE, as_rational(value))

    @classmethod
    def ghost(cls, value: RationalLike) -> SupertropicalElem:
        return cls(Tag.GHOST, as_rational(value))

    @property
    def is_zero(self) -> bool:
        return self.tag is Tag.ZERO

    @property
    def is_tangible(self) -> bool:
        return self.tag is Tag.TANGIBLE

    @property
    def is_ghost(self) -> bool:
        return self.tag is Tag.GHOST

    @property
    def is_tangible_or_zero(self) -> bool:
        return self.tag is not Tag.GHOST

    @property
    def e_value(self) -> BipotentElem:
        """The ghost of this element, read in M."""
        return BipotentElem(self.value)

    def __add__(self, other: SupertropicalElem) -> SupertropicalElem:
        return st_add(self, other)

    def __mul__(self, other: SupertropicalElem) -> SupertropicalElem:
        return st_mul(self, other)

    def __pow__(self, exponent: int) -> SupertropicalElem:
        return st_pow(self, exponent)

    def __str__(self) -> str:
        return st_render(self)

    def __repr__(self) -> str:
        if self.value is None:
            return "Zero"
        kind = "Tangible" if self.is_tangible else "Ghost"
        return f"{kind}({render_rational(self.value)})"


#: Elements of eU: ``Zero`` or a ghost.
GhostValue = SupertropicalElem

ZERO = SupertropicalElem.zero()
ONE = SupertropicalElem.tangible(0)
E = SupertropicalElem.ghost(0)


def st_add(x: SupertropicalElem, y: SupertropicalElem) -> SupertropicalElem:
    """Supertropical addition: the larger e-value wins, ties become ghost."""
    if x.value is None:
        return y
    if y.value is None:
        return x
    if x.value < y.value:
        return y
    if y.value < x.value:
        return x
    return SupertropicalElem(Tag.GHOST, x.value)


def st_mul(x: SupertropicalElem, y: SupertropicalElem) -> SupertropicalElem:
    if x.value is None or y.value is None:
        return ZERO
    tag = Tag.TANGIBLE if x.is_tangible and y.is_tangible else Tag.GHOST
    return SupertropicalElem(tag, x.value + y.value)


def st_sum(elements: t.Iterable[SupertropicalElem]) -> SupertropicalElem:
    return functools.reduce(st_add, elements, ZERO)


def st_pow(x: SupertropicalElem, exponent: int) -> SupertropicalElem:
    """``x^k``; ``x^0`` is the unit ``Tangible(0)`` even for ``x = Zero``."""
    if exponent < 0:
        return st_pow(st_inverse(x), -exponent)
    if exponent == 0:
        return ONE
    if x.value is None:
        return ZERO
    return SupertropicalElem(x.tag, x.value * exponent)


def st_inverse(x: SupertropicalElem) -> SupertropicalElem:
    """Inverse inside the group 𝒯 or 𝒢 containing ``x``."""
    if x.value is None:
        msg = "zero is neither tangible nor ghost and has no inverse"
        raise DomainError(msg)
    return SupertropicalElem(x.tag, -x.value)


def ghost_map(x: SupertropicalElem) -> GhostValue:
    """ν(x) = e·x."""
    if x.value is None:
        return ZERO
    return SupertropicalElem(Tag.GHOST, x.value)


def to_bipotent(x: SupertropicalElem) -> BipotentElem:
    """Read the ghost of ``x`` as an element of M = eU."""
    if x.value is None:
        return BP_ZERO
    return BipotentElem(x.value)


def from_bipotent(m: BipotentElem) -> GhostValue:
    """Embed M into U as eU."""
    if m.value is None:
        return ZERO
    return SupertropicalElem(Tag.GHOST, m.value)


def lift(m: BipotentElem) -> SupertropicalElem:
    """The tangible element over ``m`` (``Zero`` stays ``Zero``)."""
    if m.value is None:
        return ZERO
    return SupertropicalElem(Tag.TANGIBLE, m.value)


def gs_geq(x: SupertropicalElem, y: SupertropicalElem) -> bool:
    """Ghost surpassing: does ``x = y + z`` hold for some ``z`` in eU?"""
    if x == y:
        return True
    if not x.is_ghost:
        return False
    return y.value is None or t.cast(Fraction, x.value) >= y.value


def gs_candidates(
    x: SupertropicalElem, y: SupertropicalElem, spread: int = 2
) -> list[GhostValue]:
    """Finite candidate set for ``z`` in ``x = y + z``.

    Zero, the ghosts at the e-values of ``x`` and ``y`` and ghosts at nearby
    integer offsets of those values.
    """
    candidates: dict[GhostValue, None] = {ZERO: None}
    for value in (x.value, y.value):
        if value is None:
            continue
        for offset in range(-spread, spread + 1):
            candidates[SupertropicalElem(Tag.GHOST, value + offset)] = None
            candidates[SupertropicalElem(Tag.GHOST, value + Fraction(offset, 2))] = None
    return list(candidates)


def gs_geq_by_search(
    x: SupertropicalElem,
    y: SupertropicalElem,
    candidates: t.Iterable[GhostValue] | None = None,
) -> bool:
    """The existential definition of ``x ⊨ y`` over a finite set of ``z``."""
    pool = gs_candidates(x, y) if candidates is None else candidates
    return any(st_add(y, z) == x for z in pool)


# Text grammar: ``0`` | ``t<rational>`` | ``g<rational>``.

_ELEMENT = re.compile(r"0|[tg][+-]?\d+(?:/\d+)?")


def st_render(x: SupertropicalElem) -> str:
    if x.value is None:
        return "0"
    return f"{x.tag.value}{render_rational(x.value)}"


def st_parse(text: str) -> SupertropicalElem:
    """Parse one element literal.

    >>> st_parse("t3/2")
    Tangible(3/2)
    >>> st_parse("g-1")
    Ghost(-1)
    """
    stripped = text.strip()
    offset = len(text) - len(text.lstrip())
    match = _ELEMENT.match(stripped)
    if match is None:
        reason = "expected '0', 't<rational>' or 'g<rational>'"
        raise ParseError(reason, text, offset)
    if match.end() != len(stripped):
        reason = "unexpected trailing characters"
        raise ParseError(reason, text, offset + match.end())
    return _element_from_literal(match.group(), text, offset)


def _element_from_literal(literal: str, text: str, offset: int) -> SupertropicalElem:
    if literal == "0":
        return ZERO
    numerator, _, denominator = literal[1:].partition("/")
    if denominator and int(denominator) == 0:
        reason = "zero denominator"
        raise ParseError(reason, text, offset + literal.index("/") + 1)
    value = Fraction(int(numerator), int(denominator or 1))
    return SupertropicalElem(Tag(literal[0]), value)


_TOKEN = re.compile(r"\s*(?:(?P<element>0|[tg][+-]?\d+(?:/\d+)?)|(?P<int>\d+)|(?P<op>[+*^()]))")


class _ExpressionParser:
    """Recursive descent over ``sum := product ('+' product)*``,
    ``product := power ('*' power)*``, ``power := atom ('^' int)?``.
    """

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        position = 0
        while position < len(text):
            if text[position:].strip() == "":
                break
            match = _TOKEN.match(text, position)
            if match is None or match.end() == position:
                rest = text[position:]
                reason = "unexpected character"
                raise ParseError(reason, text, position + len(rest) - len(rest.lstrip()))
            kind = t.cast(str, match.lastgroup)
            self.tokens.append((kind, match.group(kind), match.start(kind)))
            position = match.end()
        self.index = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def expect(self, value: str) -> None:
        token = self.peek()
        if token is None or token[1] != value:
            reason = f"expected {value!r}"
            raise ParseError(reason, self.text, token[2] if token else len(self.text))
        self.index += 1

    def parse(self) -> SupertropicalElem:
        result = self.sum()
        token = self.peek()
        if token is not None:
            reason = "unexpected token"
            raise ParseError(reason, self.text, token[2])
        return result

    def sum(self) -> SupertropicalElem:
        result = self.product()
        while (token := self.peek()) is not None and token[1] == "+":
            self.index += 1
            result = st_add(result, self.product())
        return result

    def product(self) -> SupertropicalElem:
        result = self.power()
        while (token := self.peek()) is not None and token[1] == "*":
            self.index += 1
            result = st_mul(result, self.power())
        return result

    def power(self) -> SupertropicalElem:
        base = self.atom()
        token = self.peek()
        if token is None or token[1] != "^":
            return base
        self.index += 1
        exponent = self.peek()
        if exponent is None or exponent[0] not in ("int", "element") or not exponent[1].isdigit():
            reason = "expected a nonnegative integer exponent"
            raise ParseError(reason, self.text, exponent[2] if exponent else len(self.text))
        self.index += 1
        return st_pow(base, int(exponent[1]))

    def atom(self) -> SupertropicalElem:
        token = self.peek()
        if token is None:
            reason = "unexpected end of expression"
            raise ParseError(reason, self.text, len(self.text))
        kind, value, position = token
        if value == "(":
            self.index += 1
            result = self.sum()
            self.expect(")")
            return result
        if kind != "element":
            reason = "expected an element literal"
            raise ParseError(reason, self.text, position)
        self.index += 1
        return _element_from_literal(value, self.text, position)


def st_eval_expr(text: str) -> SupertropicalElem:
    """Evaluate an expression such as ``t2 + t2`` or ``(t1 + g0) * t-1 ^ 2``."""
    return _ExpressionParser(text).parse()
