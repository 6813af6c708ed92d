"""Valuations ℚ → M and ℚ≥0 → M.

Sign convention
---------------
M is written max-plus, and a valuation must satisfy ``v(a+b) ≤ max(v(a), v(b))``.
The classical p-adic order ``ord_p`` is subadditive for min, so the p-adic
valuation here is its negation: ``v(a) = Value(-ord_p(a))``. Large powers of
``p`` are therefore *small* in M, e.g. ``v(12) = Value(-2)`` for ``p = 2``.

The ℚ≥0 source is the semifield of sums of squares of ℚ; the same rules
restricted to it may become strict, which :func:`classify_strict_strong`
detects on samples.
"""
from __future__ import annotations

import abc
import dataclasses
import enum
import functools
import random
import typing as t
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .bipotent import ONE, ZERO, BipotentElem, RationalLike, as_rational, bp_add, bp_leq, bp_mul
from .errors import DomainError, ParseError

Pair = t.Tuple[Fraction, Fraction]


class SourceKind(str, enum.Enum):
    """The source semiring R."""

    Q = "Q"
    QPLUS = "Qplus"


@functools.lru_cache(maxsize=1 << 16)
def padic_order(a: Fraction, p: int) -> int:
    """The exponent of ``p`` in the nonzero rational ``a``."""
    if a == 0:
        msg = "the p-adic order of 0 is infinite"
        raise DomainError(msg)
    order = 0
    if a.numerator % p == 0:
        order += int(sympy.multiplicity(p, abs(a.numerator)))
    if a.denominator % p == 0:
        order -= int(sympy.multiplicity(p, a.denominator))
    return order


@dataclass(frozen=True)
class Valuation(abc.ABC):
    """A map ``v: R → M`` with ``v(0) = 0`` and ``v(1) = 1``.

    Subclasses implement :meth:`value_of` for nonzero arguments; calling the
    valuation handles zero and checks that the argument lies in the source.
    """

    source: SourceKind = SourceKind.Q

    @property
    @abc.abstractmethod
    def name(self) -> str:
        """Identifier in the ``--valuation`` grammar."""

    @property
    def params(self) -> dict[str, t.Any]:
        return {}

    @abc.abstractmethod
    def value_of(self, a: Fraction) -> BipotentElem:
        """``v(a)`` for ``a != 0``."""

    def __call__(self, a: RationalLike) -> BipotentElem:
        a = as_rational(a)
        if self.source is SourceKind.QPLUS and a < 0:
            msg = f"{a} is not in the source semiring Qplus"
            raise DomainError(msg)
        if a == 0:
            return ZERO
        return self.value_of(a)

    def restrict(self, source: SourceKind) -> Valuation:
        """The same rule on another source semiring."""
        return dataclasses.replace(self, source=source)

    def describe(self) -> dict[str, t.Any]:
        return {"valuation": self.name, "source_ring": self.source.value, **self.params}


@dataclass(frozen=True)
class PadicValuation(Valuation):
    p: int = 2

    def __post_init__(self) -> None:
        if self.p < 2 or not sympy.isprime(self.p):
            msg = f"p = {self.p} is not a prime"
            raise DomainError(msg)

    @property
    def name(self) -> str:
        return f"padic:{self.p}"

    @property
    def params(self) -> dict[str, t.Any]:
        return {"p": self.p}

    def value_of(self, a: Fraction) -> BipotentElem:
        return BipotentElem(Fraction(-padic_order(a, self.p)))


@dataclass(frozen=True)
class TrivialValuation(Valuation):
    @property
    def name(self) -> str:
        return "trivial"

    def value_of(self, a: Fraction) -> BipotentElem:  # noqa: ARG002
        return ONE


def padic_valuation(p: int, source: SourceKind = SourceKind.Q) -> PadicValuation:
    return PadicValuation(source=source, p=p)


def trivial_valuation(source: SourceKind = SourceKind.Q) -> TrivialValuation:
    return TrivialValuation(source=source)


def parse_valuation_spec(spec: str, source: SourceKind | str = SourceKind.Q) -> Valuation:
    """Parse ``padic:<p>`` or ``trivial``."""
    source = SourceKind(source)
    kind, _, argument = spec.strip().partition(":")
    if kind == "trivial" and not argument:
        return trivial_valuation(source)
    if kind == "padic":
        if not argument.isdigit():
            reason = "expected padic:<prime>"
            raise ParseError(reason, spec, len(kind) + 1)
        return padic_valuation(int(argument), source)
    reason = "unknown valuation, expected 'padic:<p>' or 'trivial'"
    raise ParseError(reason, spec, 0)


@dataclass
class Violation:
    law: str
    a: Fraction
    b: Fraction | None
    detail: str

    def to_json(self) -> dict[str, t.Any]:
        data: dict[str, t.Any] = {"law": self.law, "a": str(self.a), "detail": self.detail}
        if self.b is not None:
            data["b"] = str(self.b)
        return data


@dataclass
class ValuationReport:
    valuation: Valuation
    checked: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, t.Any]:
        return {
            **self.valuation.describe(),
            "checked": self.checked,
            "passed": self.passed,
            "violations": [violation.to_json() for violation in self.violations],
        }


def check_valuation_axioms(v: Valuation, samples: t.Iterable[Pair]) -> ValuationReport:
    """Check ``v(0) = 0``, ``v(1) = 1``, multiplicativity and subadditivity."""
    report = ValuationReport(v, 0)
    if v(0) != ZERO:
        report.violations.append(Violation("zero", Fraction(0), None, f"v(0) = {v(0)}"))
    if v(1) != ONE:
        report.violations.append(Violation("unit", Fraction(1), None, f"v(1) = {v(1)}"))
    for a, b in samples:
        report.checked += 1
        va, vb = v(a), v(b)
        product = v(a * b)
        if product != bp_mul(va, vb):
            detail = f"v(ab) = {product}, v(a)v(b) = {bp_mul(va, vb)}"
            report.violations.append(Violation("multiplicative", a, b, detail))
        total = v(a + b)
        if not bp_leq(total, bp_add(va, vb)):
            detail = f"v(a+b) = {total} exceeds max(v(a), v(b)) = {bp_add(va, vb)}"
            report.violations.append(Violation("subadditive", a, b, detail))
    return report


@dataclass
class StrictStrongReport:
    valuation: Valuation
    checked: int
    strict_violations: list[Pair] = field(default_factory=list)
    strong_violations: list[Pair] = field(default_factory=list)

    @property
    def strict(self) -> bool:
        """No sampled pair with ``v(a+b) != max(v(a), v(b))``."""
        return not self.strict_violations

    @property
    def strong(self) -> bool:
        return not self.strong_violations

    def to_json(self) -> dict[str, t.Any]:
        def render(pairs: list[Pair]) -> list[list[str]]:
            return [[str(a), str(b)] for a, b in pairs]

        return {
            **self.valuation.describe(),
            "checked": self.checked,
            "strict_on_samples": self.strict,
            "strong_on_samples": self.strong,
            "strict_violations": render(self.strict_violations),
            "strong_violations": render(self.strong_violations),
        }


def classify_strict_strong(v: Valuation, samples: t.Iterable[Pair]) -> StrictStrongReport:
    report = StrictStrongReport(v, 0)
    for a, b in samples:
        report.checked += 1
        va, vb = v(a), v(b)
        exact = v(a + b) == bp_add(va, vb)
        if not exact:
            report.strict_violations.append((a, b))
            if va != vb:
                report.strong_violations.append((a, b))
    return report


def random_rational(rng: random.Random, source: SourceKind = SourceKind.Q, p: int = 2) -> Fraction:
    """A sample mixing powers of ``p`` with small integers, zero included."""
    if rng.random() < 0.05:
        return Fraction(0)
    base = Fraction(rng.randint(1, 12), rng.randint(1, 12))
    value = base * Fraction(p) ** rng.randint(-4, 4)
    if source is SourceKind.Q and rng.random() < 0.5:
        value = -value
    return value


def random_pairs(
    rng: random.Random,
    count: int,
    source: SourceKind = SourceKind.Q,
    p: int = 2,
) -> list[Pair]:
    """``count`` sample pairs; about a third share a p-adic value on purpose."""
    pairs = []
    for _ in range(count):
        a = random_rational(rng, source, p)
        if rng.random() < 0.35:
            unit = Fraction(rng.choice([1, 3, 5, 7, 9, 11]), rng.choice([1, 3, 5, 7]))
            if unit.numerator % p == 0 or unit.denominator % p == 0:
                unit = Fraction(1)
            sign = -1 if source is SourceKind.Q and rng.random() < 0.5 else 1
            b = sign * unit * a
        else:
            b = random_rational(rng, source, p)
        pairs.append((a, b))
    return pairs
