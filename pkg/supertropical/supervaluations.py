"""Supervaluations φ: R → U(Γ) covering a valuation v, and dominance between them.

Two supervaluations are built for every valuation ``v``:

* :func:`tangible_lift` sends ``a ≠ 0`` to ``Tangible(v(a))``. When ``v`` is
  strong it is tangible and strong: if ``φ(a) + φ(b)`` is tangible then
  ``v(a) ≠ v(b)``, so ``v(a+b) = max(v(a), v(b))`` and ``φ(a+b)`` is exactly
  the tangible sum.
* :func:`ghost_supervaluation` is ``v`` itself with M read as eU, the bottom
  of the covering hierarchy.

Dominance ``φ ≥ ψ`` is verified against an explicitly supplied transmission
map α, never searched for.
"""
from __future__ import annotations

import abc
import itertools
import json
import os
import typing as t
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .bipotent import RationalLike, as_rational, bp_add, bp_leq
from .core import (
    E,
    ONE,
    ZERO,
    SupertropicalElem,
    ghost_map,
    gs_geq,
    lift,
    st_add,
    st_mul,
    st_parse,
    to_bipotent,
)
from .errors import ParseError, SizeBoundError
from .valuations import Pair, SourceKind, Valuation, parse_valuation_spec

DEFAULT_FRAGMENT_DEPTH = 2
DEFAULT_FRAGMENT_SIZE = 512


@dataclass(frozen=True)
class Supervaluation(abc.ABC):
    """A multiplicative map into U whose ghosts are a valuation ``covers``."""

    covers: Valuation

    @property
    @abc.abstractmethod
    def name(self) -> str:
        """Short identifier (``tangible``, ``ghost`` or a custom label)."""

    @abc.abstractmethod
    def value_of(self, a: Fraction) -> SupertropicalElem:
        """``φ(a)`` for ``a != 0``."""

    def __call__(self, a: RationalLike) -> SupertropicalElem:
        a = as_rational(a)
        if a == 0:
            self.covers(a)
            return ZERO
        return self.value_of(a)

    def describe(self) -> dict[str, t.Any]:
        return {"supervaluation": self.name, **self.covers.describe()}


@dataclass(frozen=True)
class TangibleLift(Supervaluation):
    @property
    def name(self) -> str:
        return "tangible"

    def value_of(self, a: Fraction) -> SupertropicalElem:
        return lift(self.covers(a))


@dataclass(frozen=True)
class GhostSupervaluation(Supervaluation):
    @property
    def name(self) -> str:
        return "ghost"

    def value_of(self, a: Fraction) -> SupertropicalElem:
        return ghost_map(lift(self.covers(a)))


@dataclass(frozen=True)
class RuleSupervaluation(Supervaluation):
    """A supervaluation given by an arbitrary rule on nonzero arguments."""

    label: str
    rule: t.Callable[[Fraction], SupertropicalElem] = field(compare=False)

    @property
    def name(self) -> str:
        return self.label

    def value_of(self, a: Fraction) -> SupertropicalElem:
        return self.rule(a)


def tangible_lift(v: Valuation) -> TangibleLift:
    return TangibleLift(v)


def ghost_supervaluation(v: Valuation) -> GhostSupervaluation:
    return GhostSupervaluation(v)


def make_supervaluation(kind: str, v: Valuation) -> Supervaluation:
    if kind == "tangible":
        return tangible_lift(v)
    if kind == "ghost":
        return ghost_supervaluation(v)
    reason = "unknown supervaluation kind, expected 'tangible' or 'ghost'"
    raise ParseError(reason, kind, 0)


@dataclass
class Witness:
    law: str
    args: tuple[str, ...]
    detail: str = ""

    def to_json(self) -> dict[str, t.Any]:
        data: dict[str, t.Any] = {"law": self.law, "args": list(self.args)}
        if self.detail:
            data["detail"] = self.detail
        return data


@dataclass
class CheckReport:
    """Result of a sampled check; ``passed`` iff no witness was found."""

    check: str
    subject: dict[str, t.Any]
    checked: int = 0
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict[str, t.Any]:
        return {
            "check": self.check,
            **self.subject,
            "checked": self.checked,
            "passed": self.passed,
            "witnesses": [witness.to_json() for witness in self.witnesses],
        }


def check_cover(phi: Supervaluation, samples: t.Iterable[Pair]) -> CheckReport:
    """Multiplicativity, e-subadditivity and ``eφ = v`` on every sample."""
    report = CheckReport("cover", phi.describe())
    v = phi.covers
    if phi(0) != ZERO:
        report.witnesses.append(Witness("zero", ("0",), f"φ(0) = {phi(0)}"))
    if phi(1) not in (ONE, E):
        report.witnesses.append(Witness("unit", ("1",), f"φ(1) = {phi(1)}"))
    for a, b in samples:
        report.checked += 1
        fa, fb = phi(a), phi(b)
        args = (str(a), str(b))
        product = phi(a * b)
        if product != st_mul(fa, fb):
            detail = f"φ(ab) = {product}, φ(a)φ(b) = {st_mul(fa, fb)}"
            report.witnesses.append(Witness("multiplicative", args, detail))
        ea, eb, esum = to_bipotent(fa), to_bipotent(fb), to_bipotent(phi(a + b))
        if not bp_leq(esum, bp_add(ea, eb)):
            detail = f"eφ(a+b) = {esum} exceeds eφ(a) + eφ(b) = {bp_add(ea, eb)}"
            report.witnesses.append(Witness("e_subadditive", args, detail))
        for x in (a, b, a + b, a * b):
            if to_bipotent(phi(x)) != v(x):
                detail = f"eφ({x}) = {to_bipotent(phi(x))} but v({x}) = {v(x)}"
                report.witnesses.append(Witness("covers", (str(x),), detail))
                break
    return report


def is_tangible(phi: Supervaluation, samples: t.Iterable[RationalLike]) -> CheckReport:
    """Is ``φ(a)`` tangible or zero for every sampled ``a``?"""
    report = CheckReport("tangible", phi.describe())
    for a in samples:
        report.checked += 1
        value = phi(a)
        if value.is_ghost:
            report.witnesses.append(Witness("tangible", (str(a),), f"φ({a}) = {value}"))
    return report


def is_strong(phi: Supervaluation, samples: t.Iterable[Pair]) -> CheckReport:
    """``φ(a) + φ(b)`` tangible implies ``φ(a+b) = φ(a) + φ(b)``."""
    report = CheckReport("strong", phi.describe())
    for a, b in samples:
        report.checked += 1
        total = st_add(phi(a), phi(b))
        if total.is_tangible and phi(a + b) != total:
            detail = f"φ(a)+φ(b) = {total} is tangible but φ(a+b) = {phi(a + b)}"
            report.witnesses.append(Witness("strong", (str(a), str(b)), detail))
    return report


def gs_strong_check(phi: Supervaluation, samples: t.Iterable[Pair]) -> CheckReport:
    """``φ(a) + φ(b) ⊨ φ(a+b)`` for every sampled pair."""
    report = CheckReport("gs_strong", phi.describe())
    for a, b in samples:
        report.checked += 1
        total = st_add(phi(a), phi(b))
        if not gs_geq(total, phi(a + b)):
            detail = f"φ(a)+φ(b) = {total} does not surpass φ(a+b) = {phi(a + b)} by ghost"
            report.witnesses.append(Witness("gs_strong", (str(a), str(b)), detail))
    return report


class Transmission(abc.ABC):
    """A candidate homomorphism α between generated subsemirings.

    ``__call__`` returns None where α is undefined.
    """

    @property
    @abc.abstractmethod
    def name(self) -> str:
        """Short description used in reports."""

    @abc.abstractmethod
    def __call__(self, x: SupertropicalElem) -> SupertropicalElem | None:
        ...

    def then(self, other: Transmission) -> Transmission:
        """``other ∘ self``."""
        return ComposedTransmission(self, other)


class IdentityTransmission(Transmission):
    @property
    def name(self) -> str:
        return "identity"

    def __call__(self, x: SupertropicalElem) -> SupertropicalElem:
        return x


class GhostMapTransmission(Transmission):
    @property
    def name(self) -> str:
        return "ghost_map"

    def __call__(self, x: SupertropicalElem) -> SupertropicalElem:
        return ghost_map(x)


@dataclass(frozen=True)
class TableTransmission(Transmission):
    mapping: tuple[tuple[SupertropicalElem, SupertropicalElem], ...]

    @property
    def name(self) -> str:
        return "table"

    def __call__(self, x: SupertropicalElem) -> SupertropicalElem | None:
        return dict(self.mapping).get(x)

    @classmethod
    def from_pairs(cls, pairs: t.Iterable[t.Sequence[str]]) -> TableTransmission:
        mapping = []
        for pair in pairs:
            if len(pair) != 2:
                reason = "expected a [from, to] pair"
                raise ParseError(reason, str(pair), None)
            mapping.append((st_parse(pair[0]), st_parse(pair[1])))
        return cls(tuple(mapping))


@dataclass(frozen=True)
class ComposedTransmission(Transmission):
    first: Transmission
    second: Transmission

    @property
    def name(self) -> str:
        return f"{self.second.name} o {self.first.name}"

    def __call__(self, x: SupertropicalElem) -> SupertropicalElem | None:
        y = self.first(x)
        return None if y is None else self.second(y)


def parse_transmission(spec: str | t.Sequence[t.Sequence[str]]) -> Transmission:
    """``identity``, ``ghost_map`` or a list of ``[from, to]`` element strings."""
    if spec == "identity":
        return IdentityTransmission()
    if spec == "ghost_map":
        return GhostMapTransmission()
    if isinstance(spec, str):
        reason = "expected 'identity', 'ghost_map' or a list of pairs"
        raise ParseError(reason, spec, 0)
    return TableTransmission.from_pairs(spec)


@dataclass
class DominanceWitness:
    """Claim that ``source`` dominates ``target`` through ``transmission``."""

    source: Supervaluation
    target: Supervaluation
    transmission: Transmission
    samples: tuple[Fraction, ...]

    @classmethod
    def from_json(cls, data: t.Mapping[str, t.Any]) -> DominanceWitness:
        """Read ``{"valuation", "source_ring", "source", "target", "transmission", "samples"}``.

        ``source`` and ``target`` are supervaluation kinds; ``valuation`` is a
        ``--valuation`` spec and ``samples`` a list of rational strings.
        """
        v = parse_valuation_spec(
            str(data.get("valuation", "padic:2")), SourceKind(data.get("source_ring", "Q"))
        )
        samples = tuple(as_rational(str(a)) for a in data.get("samples", ["1", "2", "3"]))
        return cls(
            make_supervaluation(str(data.get("source", "tangible")), v),
            make_supervaluation(str(data.get("target", "ghost")), v),
            parse_transmission(data.get("transmission", "ghost_map")),
            samples,
        )


def _sort_key(x: SupertropicalElem) -> tuple[int, Fraction]:
    order = {"0": 0, "t": 1, "g": 2}[x.tag.value]
    return order, x.value if x.value is not None else Fraction(0)


def fragment_levels(
    phi: Supervaluation,
    samples: t.Iterable[RationalLike],
    depth: int = DEFAULT_FRAGMENT_DEPTH,
    max_size: int = DEFAULT_FRAGMENT_SIZE,
) -> list[list[SupertropicalElem]]:
    """Successive closures of ``φ(samples) ∪ eφ(samples) ∪ {0, φ(1)}``.

    Level ``k`` holds every sum and product of two elements of level
    ``k - 1``; each level is sorted and contains the previous one.
    """
    current = {ZERO, phi(1), ghost_map(phi(1))}
    for a in samples:
        image = phi(a)
        current.update((image, ghost_map(image)))
    levels = [sorted(current, key=_sort_key)]
    for _ in range(depth):
        following = set(current)
        for x, y in itertools.combinations_with_replacement(levels[-1], 2):
            following.add(st_add(x, y))
            following.add(st_mul(x, y))
            if len(following) > max_size:
                msg = f"the generated fragment exceeds {max_size} elements"
                raise SizeBoundError(msg)
        current = following
        levels.append(sorted(current, key=_sort_key))
    return levels


def fragment(
    phi: Supervaluation,
    samples: t.Iterable[RationalLike],
    depth: int = DEFAULT_FRAGMENT_DEPTH,
    max_size: int = DEFAULT_FRAGMENT_SIZE,
) -> list[SupertropicalElem]:
    """The sample-generated part of ``⟨φ(R)⟩ = φ(R) ∪ eφ(R)``."""
    return fragment_levels(phi, samples, depth, max_size)[-1]


def verify_dominance(
    witness: DominanceWitness,
    depth: int = DEFAULT_FRAGMENT_DEPTH,
    max_size: int = DEFAULT_FRAGMENT_SIZE,
) -> CheckReport:
    """Check that α is a homomorphism on the fragment and ``ψ = α ∘ φ``.

    Addition and multiplication are checked on pairs from the
    second-to-last closure level, so both sides stay inside the fragment.
    """
    phi, psi, alpha = witness.source, witness.target, witness.transmission
    report = CheckReport(
        "dominance",
        {
            **phi.covers.describe(),
            "source": phi.name,
            "target": psi.name,
            "transmission": alpha.name,
        },
    )
    levels = fragment_levels(phi, witness.samples, depth, max_size)
    inner, outer = levels[-2] if len(levels) > 1 else levels[-1], levels[-1]

    undefined = [x for x in outer if alpha(x) is None]
    for x in undefined:
        report.witnesses.append(Witness("defined", (str(x),), "α is undefined here"))
    if alpha(ZERO) != ZERO:
        report.witnesses.append(Witness("zero", ("0",), f"α(0) = {alpha(ZERO)}"))
    if alpha(phi(1)) != psi(1):
        detail = f"α(φ(1)) = {alpha(phi(1))} but ψ(1) = {psi(1)}"
        report.witnesses.append(Witness("unit", (str(phi(1)),), detail))

    for x, y in itertools.combinations_with_replacement(inner, 2):
        report.checked += 1
        ax, ay = alpha(x), alpha(y)
        if ax is None or ay is None:
            continue
        args = (str(x), str(y))
        image = alpha(st_add(x, y))
        if image is not None and image != st_add(ax, ay):
            detail = f"α(x+y) = {image}, α(x)+α(y) = {st_add(ax, ay)}"
            report.witnesses.append(Witness("additive", args, detail))
        image = alpha(st_mul(x, y))
        if image is not None and image != st_mul(ax, ay):
            detail = f"α(xy) = {image}, α(x)α(y) = {st_mul(ax, ay)}"
            report.witnesses.append(Witness("multiplicative", args, detail))

    for a in witness.samples:
        if alpha(phi(a)) != psi(a):
            detail = f"α(φ({a})) = {alpha(phi(a))} but ψ({a}) = {psi(a)}"
            report.witnesses.append(Witness("transmits", (str(a),), detail))
    return report


def verify_equivalence(
    phi: Supervaluation,
    psi: Supervaluation,
    alpha: Transmission,
    beta: Transmission,
    samples: t.Sequence[RationalLike],
    depth: int = DEFAULT_FRAGMENT_DEPTH,
    max_size: int = DEFAULT_FRAGMENT_SIZE,
) -> CheckReport:
    """``φ ~ ψ``: α witnesses ``φ ≥ ψ`` and β witnesses ``ψ ≥ φ``."""
    points = tuple(as_rational(a) for a in samples)
    forward = verify_dominance(DominanceWitness(phi, psi, alpha, points), depth, max_size)
    backward = verify_dominance(DominanceWitness(psi, phi, beta, points), depth, max_size)
    report = CheckReport(
        "equivalence",
        {**phi.covers.describe(), "source": phi.name, "target": psi.name},
        forward.checked + backward.checked,
    )
    report.witnesses.extend(forward.witnesses)
    report.witnesses.extend(backward.witnesses)
    return report


def load_witness(path: str | os.PathLike[str]) -> DominanceWitness:
    """Read a :class:`DominanceWitness` from a JSON file."""
    with Path(path).open(encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, e.doc, e.pos) from e
    if not isinstance(data, dict):
        reason = "a dominance witness must be a JSON object"
        raise ParseError(reason, str(path), None)
    return DominanceWitness.from_json(data)
