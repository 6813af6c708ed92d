"""Machine checks of the ghost-surpassing identity and Kapranov containment.

For a rational polynomial ``f``, a point ``a`` and a strong supervaluation φ
the identity reads::

    ε_{φ(a)} φ̃(f)  ⊨  φ(ε_a f)

i.e. evaluating after lifting surpasses lifting after evaluating, by a ghost.
At a root of ``f`` the right side is ``Zero``; when φ is tangible every summand
``φ(c_i) φ(a)^i`` is tangible or zero, so a ghost left side forces the maximal
e-value to be attained twice. Read through ``v = eφ`` this is Kapranov's
containment ``v(Z(f)) ⊂ Z₀(ṽ(f))``.
"""
from __future__ import annotations

import concurrent.futures
import itertools
import logging
import random
import typing as t
from dataclasses import dataclass, field
from fractions import Fraction

from . import bipotent
from .bipotent import BipotentElem, RationalLike, as_rational, render_bipotent, render_rational
from .core import SupertropicalElem, gs_geq, st_render, to_bipotent
from .errors import ArityError, PreconditionError, Refutation, SizeBoundError
from .polynomials import (
    RATIONALS,
    Exponent,
    SparsePoly,
    argmax_terms,
    monomial_values,
    poly_eval,
    render_poly,
    tilde_map,
    tilde_v,
)
from .supervaluations import (
    CheckReport,
    DominanceWitness,
    Supervaluation,
    Transmission,
    is_strong,
    tangible_lift,
    verify_dominance,
)
from .valuations import Valuation, padic_valuation

log = logging.getLogger(__name__)

MAX_DEGREE = 6
MAX_INSTANCES = 10**6
SUPPORTED_NVARS = (1, 2)

InstanceT = t.TypeVar("InstanceT")


def _as_point(point: t.Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(as_rational(x) for x in point)


@dataclass(frozen=True)
class Theorem51Instance:
    """``(f, a, φ)``; φ is admitted only if it is strong on :meth:`admission_pairs`."""

    poly: SparsePoly[Fraction]
    point: tuple[Fraction, ...]
    phi: Supervaluation

    def __post_init__(self) -> None:
        object.__setattr__(self, "point", _as_point(self.point))
        if len(self.point) != self.poly.nvars:
            msg = f"point has {len(self.point)} coordinates, polynomial has {self.poly.nvars} variables"
            raise ArityError(msg)

    def admission_pairs(self) -> list[tuple[Fraction, Fraction]]:
        """All pairs from the coefficients of ``f`` and the coordinates of ``a``.

        ``is_strong`` evaluates φ on every pairwise sum.
        """
        elements = sorted({c for _, c in self.poly.items()} | set(self.point))
        return list(itertools.combinations_with_replacement(elements, 2))


@dataclass
class Theorem51Result:
    instance: Theorem51Instance
    lhs: SupertropicalElem
    rhs: SupertropicalElem
    argmax_count: int
    summands_tangible: bool

    @property
    def root(self) -> bool:
        return self.rhs.is_zero

    @property
    def holds(self) -> bool:
        return gs_geq(self.lhs, self.rhs)

    @property
    def ghost_discrepancy_ok(self) -> bool:
        """A tangible (or zero) left side must equal the right side."""
        return self.lhs == self.rhs or self.lhs.is_ghost

    @property
    def chain_ok(self) -> bool:
        """At a root with tangible summands the e-maximum is attained twice."""
        if not (self.root and self.summands_tangible and not self.lhs.is_zero):
            return True
        return self.lhs.is_ghost and self.argmax_count >= 2

    @property
    def passed(self) -> bool:
        return self.holds and self.ghost_discrepancy_ok and self.chain_ok

    def to_json(self) -> dict[str, t.Any]:
        return {
            "poly": render_poly(self.instance.poly),
            "point": [render_rational(x) for x in self.instance.point],
            "phi": self.instance.phi.describe(),
            "lhs": st_render(self.lhs),
            "rhs": st_render(self.rhs),
            "root": self.root,
            "holds": self.holds,
            "ghost_discrepancy_ok": self.ghost_discrepancy_ok,
            "argmax_count": self.argmax_count,
            "chain_ok": self.chain_ok,
            "passed": self.passed,
        }


def check_theorem51(instance: Theorem51Instance, admit: bool = True) -> Theorem51Result:
    """Compare ``ε_{φ(a)} φ̃(f)`` with ``φ(ε_a f)`` under ghost surpassing.

    With ``admit`` the supervaluation is first checked to be strong on the
    instance and rejected with :class:`PreconditionError` otherwise.
    """
    phi, f = instance.phi, instance.poly
    if admit:
        strong = is_strong(phi, instance.admission_pairs())
        if not strong.passed:
            witness = strong.witnesses[0]
            msg = f"{phi.name} supervaluation is not strong on {witness.args}: {witness.detail}"
            raise PreconditionError(msg)
    images = [phi(x) for x in instance.point]
    summands = monomial_values(tilde_map(phi, f), images)
    lhs = SupertropicalElem.zero()
    for value in summands.values():
        lhs = lhs + value
    rhs = phi(poly_eval(f, instance.point))
    top = bipotent.bp_sum(to_bipotent(value) for value in summands.values())
    argmax_count = 0
    if not top.is_zero:
        argmax_count = sum(1 for value in summands.values() if to_bipotent(value) == top)
    return Theorem51Result(
        instance,
        lhs,
        rhs,
        argmax_count,
        all(value.is_tangible_or_zero for value in summands.values()),
    )


@dataclass(frozen=True)
class KapranovInstance:
    """A polynomial with a known rational root and the valuation to apply."""

    poly: SparsePoly[Fraction]
    root: tuple[Fraction, ...]
    valuation: Valuation

    def __post_init__(self) -> None:
        object.__setattr__(self, "root", _as_point(self.root))
        if any(x == 0 for x in self.root):
            msg = f"root {self.root} has a zero coordinate, only torus points are checked"
            raise PreconditionError(msg)
        value = poly_eval(self.poly, self.root)
        if value != 0:
            msg = f"{render_poly(self.poly)} is {render_rational(value)} at {self.root}, not a root"
            raise PreconditionError(msg)


@dataclass
class KapranovResult:
    instance: KapranovInstance
    xi: tuple[BipotentElem, ...]
    argmax: list[Exponent] = field(default_factory=list)

    @property
    def member(self) -> bool:
        return len(self.argmax) >= 2

    @property
    def passed(self) -> bool:
        return self.member

    def to_json(self) -> dict[str, t.Any]:
        return {
            "poly": render_poly(self.instance.poly),
            "root": [render_rational(x) for x in self.instance.root],
            **self.instance.valuation.describe(),
            "xi": [render_bipotent(x) for x in self.xi],
            "argmax": [",".join(map(str, exponent)) for exponent in self.argmax],
            "member": self.member,
            "passed": self.passed,
        }


def check_kapranov(instance: KapranovInstance) -> KapranovResult:
    """Is ``v(a)`` on the corner locus of ``ṽ(f)``?"""
    v = instance.valuation
    xi = tuple(v(x) for x in instance.root)
    return KapranovResult(instance, xi, argmax_terms(tilde_v(v, instance.poly), xi))


@dataclass
class MonotonicityReport:
    """The identity for φ and for ψ, and α carrying one to the other."""

    dominance: CheckReport
    source: Theorem51Result
    target: Theorem51Result
    transmission: Transmission = field(repr=False)

    @property
    def transmits(self) -> bool:
        alpha = self.transmission
        return alpha(self.source.lhs) == self.target.lhs and alpha(self.source.rhs) == self.target.rhs

    @property
    def passed(self) -> bool:
        return self.dominance.passed and self.source.passed and self.target.passed and self.transmits

    def to_json(self) -> dict[str, t.Any]:
        return {
            "dominance": self.dominance.to_json(),
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "transmits": self.transmits,
            "passed": self.passed,
        }


def check_dominance_monotonicity(
    poly: SparsePoly[Fraction],
    point: t.Sequence[RationalLike],
    phi: Supervaluation,
    psi: Supervaluation,
    alpha: Transmission,
    samples: t.Sequence[RationalLike] | None = None,
) -> MonotonicityReport:
    """If φ dominates ψ through α, the identity for φ carries over to ψ.

    Dominance is checked on the fragment generated by ``samples`` (default:
    the coefficients of ``poly`` and the coordinates of ``point``). A failed
    dominance witness is reported next to the two theorem checks, which are
    always computed.
    """
    left = Theorem51Instance(poly, tuple(point), phi)
    right = Theorem51Instance(poly, tuple(point), psi)
    if samples is None:
        samples = sorted({c for _, c in poly.items()} | set(left.point))
    witness = DominanceWitness(phi, psi, alpha, _as_point(samples))
    return MonotonicityReport(
        verify_dominance(witness),
        check_theorem51(left),
        check_theorem51(right),
        alpha,
    )


def _check_bounds(count: int, nvars: t.Iterable[int], degree: int) -> None:
    if not 0 <= count <= MAX_INSTANCES:
        msg = f"count must lie in [0, {MAX_INSTANCES}], got {count}"
        raise SizeBoundError(msg)
    for n in nvars:
        if n not in SUPPORTED_NVARS:
            msg = f"instances have 1 or 2 variables, got {n}"
            raise SizeBoundError(msg)
    if not 1 <= degree <= MAX_DEGREE:
        msg = f"degree must lie in [1, {MAX_DEGREE}], got {degree}"
        raise SizeBoundError(msg)


def random_root(rng: random.Random, p: int) -> Fraction:
    """``±p^k · m / d`` with small ``k``, ``m`` and ``d``."""
    value = Fraction(rng.randint(1, 9), rng.randint(1, 4)) * Fraction(p) ** rng.randint(-3, 3)
    return -value if rng.random() < 0.5 else value


def _linear(nvars: int, constant: Fraction, *coefficients: Fraction) -> SparsePoly[Fraction]:
    form = SparsePoly.constant(RATIONALS, nvars, constant)
    for index, c in enumerate(coefficients):
        form = form + SparsePoly.variable(RATIONALS, nvars, index) * SparsePoly.constant(
            RATIONALS, nvars, c
        )
    return form


def root_polynomial(
    rng: random.Random, p: int, nvars: int, degree: int
) -> tuple[SparsePoly[Fraction], tuple[Fraction, ...]]:
    """A product of ``degree`` linear factors vanishing at the returned point.

    In one variable every factor is ``λ - r_j`` and the point is ``r_1``. In two
    variables the first factor is ``λ1 + βλ2 - (a1 + βa2)`` and the others
    are arbitrary linear forms.
    """
    scale = random_root(rng, p)
    if nvars == 1:
        roots = [random_root(rng, p) for _ in range(degree)]
        f = SparsePoly.constant(RATIONALS, 1, scale)
        for r in roots:
            f = f * _linear(1, -r, Fraction(1))
        return f, (roots[0],)
    a1, a2, beta = random_root(rng, p), random_root(rng, p), random_root(rng, p)
    f = SparsePoly.constant(RATIONALS, 2, scale) * _linear(2, -(a1 + beta * a2), Fraction(1), beta)
    for _ in range(degree - 1):
        f = f * _linear(2, random_root(rng, p), random_root(rng, p), random_root(rng, p))
    return f, (a1, a2)


def generate_root_instances(
    seed: int,
    count: int,
    p: int = 2,
    nvars: int = 1,
    degree: int = 2,
) -> list[KapranovInstance]:
    """Deterministic Kapranov instances with exactly known roots."""
    _check_bounds(count, (nvars,), degree)
    v = padic_valuation(p)
    rng = random.Random(seed)
    instances = []
    for _ in range(count):
        f, root = root_polynomial(rng, p, nvars, degree)
        instances.append(KapranovInstance(f, root, v))
    return instances


def generate_theorem51_instances(
    seed: int,
    count: int,
    primes: t.Sequence[int] = (2, 3, 5),
    nvars: t.Sequence[int] = SUPPORTED_NVARS,
    max_degree: int = MAX_DEGREE,
    root_fraction: float = 0.5,
) -> list[Theorem51Instance]:
    """Instances over products of linear factors, at roots and elsewhere.

    φ is the tangible lift of the p-adic valuation for a prime drawn from
    ``primes``. Non-root points occasionally have a zero coordinate.
    """
    _check_bounds(count, nvars, max_degree)
    lifts = {p: tangible_lift(padic_valuation(p)) for p in primes}
    rng = random.Random(seed)
    instances = []
    for _ in range(count):
        p = rng.choice(list(primes))
        n = rng.choice(list(nvars))
        f, root = root_polynomial(rng, p, n, rng.randint(1, max_degree))
        if rng.random() < root_fraction:
            point = root
        else:
            point = tuple(
                Fraction(0) if rng.random() < 0.05 else random_root(rng, p) for _ in range(n)
            )
        instances.append(Theorem51Instance(f, point, lifts[p]))
    return instances


def _run_one(job: tuple[int, t.Callable[[InstanceT], t.Any], InstanceT]) -> dict[str, t.Any]:
    index, check, instance = job
    record = check(instance).to_json()
    record["index"] = index
    return t.cast(t.Dict[str, t.Any], record)


def run_suite(
    instances: t.Iterable[InstanceT],
    check: t.Callable[[InstanceT], t.Any],
    jobs: int = 1,
    logger: logging.Logger | None = None,
    chunksize: int = 64,
) -> list[dict[str, t.Any]]:
    """Check every instance and return the records ordered by ``index``.

    ``check`` must be a module-level function when ``jobs > 1``; its results
    need a ``to_json`` method.
    """
    logger = logger or log
    work = ((index, check, instance) for index, instance in enumerate(instances))
    records: list[dict[str, t.Any]] = []
    if jobs <= 1:
        results: t.Iterable[dict[str, t.Any]] = map(_run_one, work)
        records.extend(_progress(results, logger))
        return records
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        records.extend(_progress(pool.map(_run_one, work, chunksize=chunksize), logger))
    return records


def _progress(
    results: t.Iterable[dict[str, t.Any]], logger: logging.Logger
) -> t.Iterator[dict[str, t.Any]]:
    for done, record in enumerate(results, start=1):
        if done % 1000 == 0:
            logger.info("Checked %d instances", done)
        yield record


def refutations(records: t.Iterable[t.Mapping[str, t.Any]]) -> list[t.Mapping[str, t.Any]]:
    return [record for record in records if not record["passed"]]


def ensure_no_refutation(records: t.Sequence[t.Mapping[str, t.Any]], what: str) -> None:
    """Raise :class:`Refutation` for the first failed record."""
    failed = refutations(records)
    if failed:
        first = failed[0]
        msg = f"{what} refuted on instance {first.get('index')} ({len(failed)} of {len(records)} failed)"
        raise Refutation(msg, first)
