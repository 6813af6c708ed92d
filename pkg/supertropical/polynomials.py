"""Sparse polynomials over ℚ, M and U, tilde-maps and the corner locus.

A polynomial is a finite map from exponent vectors to nonzero coefficients of
one coefficient :class:`Semiring`. Terms are kept in descending lexicographic
exponent order so rendering and iteration are deterministic.

Corner locus conventions: ``Zero^0`` is the unit, and a tie of several terms
at the overall value ``Zero`` counts like any other tie.
"""
from __future__ import annotations

import itertools
import logging
import operator
import re
import typing as t
from dataclasses import dataclass
from fractions import Fraction
from tokenize import TokenError

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

from . import bipotent, core
from .bipotent import BipotentElem, RationalLike, as_rational, parse_rational, render_rational
from .core import SupertropicalElem
from .errors import ArityError, DomainError, ParseError, SizeBoundError

if t.TYPE_CHECKING:
    from .supervaluations import Supervaluation
    from .valuations import Valuation

log = logging.getLogger(__name__)

C = t.TypeVar("C")
Exponent = t.Tuple[int, ...]
TropicalPoint = t.Tuple[BipotentElem, ...]

DEFAULT_MAX_GRID_POINTS = 10**6
ALIASES = ("x", "y", "z")


@dataclass(frozen=True)
class Semiring(t.Generic[C]):
    """The operations a coefficient kind brings to :class:`SparsePoly`."""

    name: str
    zero: C
    one: C
    add: t.Callable[[C, C], C]
    mul: t.Callable[[C, C], C]
    pow: t.Callable[[C, int], C]
    render: t.Callable[[C], str]

    def is_zero(self, c: C) -> bool:
        return c == self.zero

    def __reduce__(self) -> tuple[t.Any, ...]:
        return semiring_named, (self.name,)

    def sum(self, items: t.Iterable[C]) -> C:
        total = self.zero
        for item in items:
            total = self.add(total, item)
        return total


RATIONALS: Semiring[Fraction] = Semiring(
    "rational",
    Fraction(0),
    Fraction(1),
    operator.add,
    operator.mul,
    operator.pow,
    render_rational,
)
BIPOTENT: Semiring[BipotentElem] = Semiring(
    "bipotent",
    bipotent.ZERO,
    bipotent.ONE,
    bipotent.bp_add,
    bipotent.bp_mul,
    bipotent.bp_pow,
    bipotent.render_bipotent,
)
SUPERTROPICAL: Semiring[SupertropicalElem] = Semiring(
    "supertropical",
    core.ZERO,
    core.ONE,
    core.st_add,
    core.st_mul,
    core.st_pow,
    core.st_render,
)


def semiring_named(name: str) -> Semiring[t.Any]:
    """Look up one of the three coefficient semirings by name."""
    for ring in (RATIONALS, BIPOTENT, SUPERTROPICAL):
        if ring.name == name:
            return ring
    msg = f"unknown coefficient semiring {name!r}"
    raise DomainError(msg)


def variable_names(nvars: int) -> tuple[str, ...]:
    if nvars <= len(ALIASES):
        return ALIASES[:nvars]
    return tuple(f"x{i + 1}" for i in range(nvars))


def variable_index(name: str) -> int | None:
    """``x``, ``y``, ``z`` or ``x<k>`` to a 0-based index."""
    if name in ALIASES:
        return ALIASES.index(name)
    match = re.fullmatch(r"x([1-9]\d*)", name)
    return int(match.group(1)) - 1 if match else None


class SparsePoly(t.Generic[C]):
    """An immutable polynomial ``Σ c_i λ^i`` in ``nvars`` variables."""

    __slots__ = ("_terms", "nvars", "ring")

    def __init__(
        self,
        ring: Semiring[C],
        nvars: int,
        terms: t.Mapping[Exponent, C] | t.Iterable[tuple[Exponent, C]] = (),
    ) -> None:
        if nvars < 0:
            msg = f"a polynomial needs a nonnegative variable count, got {nvars}"
            raise DomainError(msg)
        items = terms.items() if isinstance(terms, t.Mapping) else terms
        merged: dict[Exponent, C] = {}
        for exponent, coefficient in items:
            key = tuple(int(i) for i in exponent)
            if len(key) != nvars:
                msg = f"exponent {key} does not have {nvars} entries"
                raise ArityError(msg)
            if any(i < 0 for i in key):
                msg = f"exponent {key} has a negative entry"
                raise DomainError(msg)
            merged[key] = ring.add(merged[key], coefficient) if key in merged else coefficient
        self.ring = ring
        self.nvars = nvars
        self._terms = {
            exponent: merged[exponent]
            for exponent in sorted(merged, reverse=True)
            if not ring.is_zero(merged[exponent])
        }

    @classmethod
    def constant(cls, ring: Semiring[C], nvars: int, c: C) -> SparsePoly[C]:
        return cls(ring, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, ring: Semiring[C], nvars: int, index: int) -> SparsePoly[C]:
        if not 0 <= index < nvars:
            msg = f"variable {index} does not exist in {nvars} variables"
            raise ArityError(msg)
        exponent = tuple(int(i == index) for i in range(nvars))
        return cls(ring, nvars, {exponent: ring.one})

    @property
    def terms(self) -> dict[Exponent, C]:
        return dict(self._terms)

    def items(self) -> t.ItemsView[Exponent, C]:
        return self._terms.items()

    def coefficient(self, exponent: Exponent) -> C:
        return self._terms.get(tuple(exponent), self.ring.zero)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(exponent) for exponent in self._terms), default=-1)

    def __len__(self) -> int:
        return len(self._terms)

    def _check_compatible(self, other: SparsePoly[C]) -> None:
        if other.ring.name != self.ring.name or other.nvars != self.nvars:
            msg = (
                f"cannot combine a {self.ring.name} polynomial in {self.nvars} variables "
                f"with a {other.ring.name} polynomial in {other.nvars}"
            )
            raise ArityError(msg)

    def __add__(self, other: SparsePoly[C]) -> SparsePoly[C]:
        self._check_compatible(other)
        return SparsePoly(self.ring, self.nvars, itertools.chain(self.items(), other.items()))

    def __mul__(self, other: SparsePoly[C]) -> SparsePoly[C]:
        self._check_compatible(other)
        products = (
            (tuple(i + j for i, j in zip(e, f)), self.ring.mul(c, d))
            for (e, c), (f, d) in itertools.product(self.items(), other.items())
        )
        return SparsePoly(self.ring, self.nvars, products)

    def __pow__(self, exponent: int) -> SparsePoly[C]:
        if exponent < 0:
            msg = "polynomials only have nonnegative powers"
            raise DomainError(msg)
        result = SparsePoly.constant(self.ring, self.nvars, self.ring.one)
        for _ in range(exponent):
            result = result * self
        return result

    def __neg__(self) -> SparsePoly[C]:
        if self.ring is not RATIONALS:
            msg = f"{self.ring.name} polynomials have no additive inverse"
            raise DomainError(msg)
        return SparsePoly(self.ring, self.nvars, ((e, -c) for e, c in self.items()))  # type: ignore[operator]

    def __sub__(self, other: SparsePoly[C]) -> SparsePoly[C]:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return (
            self.ring.name == other.ring.name
            and self.nvars == other.nvars
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.ring.name, self.nvars, tuple(self._terms.items())))

    def __repr__(self) -> str:
        return f"SparsePoly[{self.ring.name}]({render_poly(self)!r})"

    def __getstate__(self) -> tuple[Semiring[C], int, dict[Exponent, C]]:
        return self.ring, self.nvars, self._terms

    def __setstate__(self, state: tuple[Semiring[C], int, dict[Exponent, C]]) -> None:
        self.ring, self.nvars, self._terms = state

    def map_coefficients(
        self, ring: Semiring[t.Any], rule: t.Callable[[C], t.Any]
    ) -> SparsePoly[t.Any]:
        """Apply ``rule`` to every coefficient; zero images are dropped."""
        return SparsePoly(ring, self.nvars, ((e, rule(c)) for e, c in self.items()))

    def evaluate(self, point: t.Sequence[C]) -> C:
        return poly_eval(self, point)

    def to_json(self) -> dict[str, str]:
        """Coefficients keyed by ``"2"`` (one variable) or ``"1,0"``."""
        return {
            ",".join(map(str, exponent)): self.ring.render(coefficient)
            for exponent, coefficient in self.items()
        }


def _check_arity(f: SparsePoly[t.Any], point: t.Sized) -> None:
    if len(point) != f.nvars:
        msg = f"point has {len(point)} coordinates, polynomial has {f.nvars} variables"
        raise ArityError(msg)


def monomial_values(f: SparsePoly[C], point: t.Sequence[C]) -> dict[Exponent, C]:
    """``c_i a^i`` for every term, in term order."""
    _check_arity(f, point)
    ring = f.ring
    values = {}
    for exponent, coefficient in f.items():
        value = coefficient
        for x, k in zip(point, exponent):
            value = ring.mul(value, ring.pow(x, k))
        values[exponent] = value
    return values


def poly_eval(f: SparsePoly[C], point: t.Sequence[C]) -> C:
    """The evaluation homomorphism ``ε_a`` of the coefficient semiring."""
    if f.ring is RATIONALS:
        point = [as_rational(t.cast(RationalLike, x)) for x in point]  # type: ignore[misc]
    return f.ring.sum(monomial_values(f, point).values())


def tilde_map(phi: Supervaluation, f: SparsePoly[Fraction]) -> SparsePoly[SupertropicalElem]:
    """``φ̃(Σ c_i λ^i) = Σ φ(c_i) λ^i``."""
    return f.map_coefficients(SUPERTROPICAL, phi)


def tilde_v(v: Valuation, f: SparsePoly[Fraction]) -> SparsePoly[BipotentElem]:
    """``ṽ(Σ c_i λ^i) = Σ v(c_i) λ^i``."""
    return f.map_coefficients(BIPOTENT, v)


def tropical_term_values(
    g: SparsePoly[BipotentElem], xi: t.Sequence[BipotentElem]
) -> dict[Exponent, BipotentElem]:
    return monomial_values(g, xi)


def argmax_terms(
    g: SparsePoly[BipotentElem], xi: t.Sequence[BipotentElem]
) -> list[Exponent]:
    """Exponents whose term value equals the maximum of all term values."""
    if g.is_zero:
        msg = "the corner locus of the zero polynomial is undefined"
        raise DomainError(msg)
    values = tropical_term_values(g, xi)
    top = bipotent.bp_sum(values.values())
    return [exponent for exponent, value in values.items() if value == top]


def corner_locus_member(g: SparsePoly[BipotentElem], xi: t.Sequence[BipotentElem]) -> bool:
    """Is the maximum of the term values attained at least twice at ``ξ``?"""
    return len(argmax_terms(g, xi)) >= 2


@dataclass(frozen=True)
class GridAxis:
    """``name=start..stop:step`` on one coordinate."""

    name: str
    start: Fraction
    stop: Fraction
    step: Fraction

    def values(self) -> list[Fraction]:
        count = int((self.stop - self.start) // self.step) + 1
        return [self.start + k * self.step for k in range(count)]


_AXIS = re.compile(
    r"\s*(?P<name>[a-z]\w*)\s*=\s*(?P<start>[^.:,]+)\.\.(?P<stop>[^:,]+)(?::(?P<step>[^,]+))?\s*"
)


def parse_grid(spec: str) -> list[GridAxis]:
    """Parse ``x=-4..1:1,y=-2..2:1/2``; the step defaults to 1.

    Axes are returned ordered by variable index, so ``y=...,x=...`` and
    ``x=...,y=...`` describe the same grid.
    """
    axes: dict[int, GridAxis] = {}
    position = 0
    for chunk in spec.split(","):
        match = _AXIS.fullmatch(chunk)
        if match is None:
            reason = "expected name=start..stop[:step]"
            raise ParseError(reason, spec, position)
        name = match.group("name")
        index = variable_index(name)
        if index is None or index in axes:
            reason = "unknown or repeated variable"
            raise ParseError(reason, spec, position + match.start("name"))
        values = []
        for group in ("start", "stop", "step"):
            text = match.group(group)
            try:
                values.append(parse_rational(text) if text is not None else Fraction(1))
            except ParseError as e:
                offset = position + match.start(group) + (e.position or 0)
                raise ParseError(e.reason, spec, offset) from e
        start, stop, step = values
        if step <= 0 or stop < start:
            reason = "degenerate axis, expected start <= stop and step > 0"
            raise ParseError(reason, spec, position + match.start("start"))
        axes[index] = GridAxis(name, start, stop, step)
        position += len(chunk) + 1
    if sorted(axes) != list(range(len(axes))):
        reason = "grid axes must cover the variables x1..xn without gaps"
        raise ParseError(reason, spec, None)
    return [axes[index] for index in sorted(axes)]


def grid_points(
    axes: t.Sequence[GridAxis], max_points: int = DEFAULT_MAX_GRID_POINTS
) -> list[TropicalPoint]:
    """All lattice points, row-major: the first axis varies slowest."""
    columns = [axis.values() for axis in axes]
    total = 1
    for column in columns:
        total *= len(column)
    if total > max_points:
        msg = f"the grid has {total} points, more than the bound of {max_points}"
        raise SizeBoundError(msg)
    return [
        tuple(BipotentElem(value) for value in values)
        for values in itertools.product(*columns)
    ]


def corner_locus_grid(
    g: SparsePoly[BipotentElem],
    grid: t.Sequence[GridAxis] | t.Iterable[TropicalPoint],
    max_points: int = DEFAULT_MAX_GRID_POINTS,
) -> list[TropicalPoint]:
    """The grid points lying on the corner locus of ``g``, in grid order."""
    grid = list(grid)
    if grid and isinstance(grid[0], GridAxis):
        axes = t.cast(t.List[GridAxis], grid)
        if len(axes) != g.nvars:
            msg = f"grid has {len(axes)} axes, polynomial has {g.nvars} variables"
            raise ArityError(msg)
        points = grid_points(axes, max_points)
    else:
        points = t.cast(t.List[TropicalPoint], grid)
    members = [point for point in points if corner_locus_member(g, point)]
    log.debug("%d of %d grid points lie on the corner locus", len(members), len(points))
    return members


# parse_expr evaluates its input; only arithmetic on names and integers gets through
_POLY_FORBIDDEN = re.compile(r"[^\w\s+\-*/^()]")


def _poly_namespace() -> dict[str, t.Any]:
    """The only names the sympy parser may resolve, with builtins removed."""
    return {
        "__builtins__": {},
        "Integer": sympy.Integer,
        "Float": sympy.Float,
        "Symbol": sympy.Symbol,
    }


def parse_poly(text: str, nvars: int | None = None) -> SparsePoly[Fraction]:
    """Parse a rational polynomial such as ``x^2*y - 3/4*x + 5``.

    Variables are ``x1 .. xn`` with the aliases ``x``, ``y`` and ``z`` for the
    first three. ``nvars`` widens the polynomial beyond the variables that
    actually occur.
    """
    if not text.strip():
        reason = "empty polynomial"
        raise ParseError(reason, text, 0)
    if re.search(r"\d\.\d|\d\.(?!\d)|\.\d", text):
        reason = "decimal literals are not exact, write p/q"
        raise ParseError(reason, text, text.index("."))
    if (bad := _POLY_FORBIDDEN.search(text)) is not None:
        reason = f"unexpected character {bad.group()!r}"
        raise ParseError(reason, text, bad.start())
    try:
        expr = parse_expr(
            text,
            local_dict={},
            global_dict=_poly_namespace(),
            transformations=(*standard_transformations, convert_xor),
            evaluate=True,
        )
    except (
        SyntaxError,
        TokenError,
        TypeError,
        ValueError,
        AttributeError,
        NameError,
        sympy.SympifyError,
    ) as e:
        reason = f"not a polynomial expression ({e.__class__.__name__})"
        raise ParseError(reason, text, getattr(e, "offset", None)) from e

    indices = {}
    for symbol in sorted(expr.free_symbols, key=str):
        index = variable_index(str(symbol))
        if index is None:
            reason = f"unknown variable {symbol}"
            found = re.search(rf"\b{re.escape(str(symbol))}\b", text)
            raise ParseError(reason, text, found.start() if found else None)
        indices[symbol] = index
    n = max(indices.values(), default=0) + 1
    if nvars is not None:
        if nvars < n:
            msg = f"the polynomial uses {n} variables, more than {nvars}"
            raise ArityError(msg)
        n = nvars
    gens = sympy.symbols(f"x1:{n + 1}")
    expr = expr.subs({symbol: gens[index] for symbol, index in indices.items()})
    try:
        poly = sympy.Poly(expr, *gens)
    except (sympy.PolynomialError, TypeError, ValueError) as e:
        reason = "not a polynomial"
        raise ParseError(reason, text, None) from e
    terms = {}
    for exponent, coefficient in poly.as_dict().items():
        if not coefficient.is_Rational:
            reason = "coefficients must be rational"
            raise ParseError(reason, text, None)
        terms[exponent] = Fraction(int(coefficient.p), int(coefficient.q))
    return SparsePoly(RATIONALS, n, terms)


def _monomial(exponent: Exponent, names: t.Sequence[str]) -> str:
    factors = []
    for name, k in zip(names, exponent):
        if k == 1:
            factors.append(name)
        elif k > 1:
            factors.append(f"{name}^{k}")
    return "*".join(factors)


def render_poly(f: SparsePoly[t.Any]) -> str:
    """Render in the polynomial grammar; rational output re-parses exactly."""
    if f.is_zero:
        return render_rational(Fraction(0)) if f.ring is RATIONALS else f.ring.render(f.ring.zero)
    names = variable_names(f.nvars)
    if f.ring is not RATIONALS:
        parts = []
        for exponent, coefficient in f.items():
            monomial = _monomial(exponent, names)
            rendered = f.ring.render(coefficient)
            parts.append(f"{rendered}*{monomial}" if monomial else rendered)
        return " + ".join(parts)
    text = ""
    for exponent, coefficient in f.items():
        monomial = _monomial(exponent, names)
        magnitude = abs(coefficient)
        if not monomial:
            body = render_rational(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{render_rational(magnitude)}*{monomial}"
        if not text:
            text = f"-{body}" if coefficient < 0 else body
        else:
            text += f" - {body}" if coefficient < 0 else f" + {body}"
    return text


@dataclass(frozen=True)
class Coherence:
    """e-value of the supertropical side against the bipotent side."""

    lhs: BipotentElem
    rhs: BipotentElem

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def check_evaluation_coherence(
    phi: Supervaluation, f: SparsePoly[Fraction], xi: t.Sequence[BipotentElem]
) -> Coherence:
    """Compare ``e·ε_{lift(ξ)} φ̃(f)`` with ``ε_ξ ṽ(f)`` for the covered ``v``."""
    lifted = [core.lift(x) for x in xi]
    lhs = core.to_bipotent(poly_eval(tilde_map(phi, f), lifted))
    rhs = poly_eval(tilde_v(phi.covers, f), xi)
    return Coherence(lhs, rhs)
