"""The ``supertropical`` command line application."""
from __future__ import annotations

import contextlib
import logging
import os
import random
import sys
import typing as t
from pathlib import Path

from jupyter_core.application import JupyterApp, base_aliases, base_flags
from traitlets import Enum, Integer, List, Unicode, default
from traitlets.config.loader import Config

from . import kapranov, lab, reports
from ._version import __version__
from .bipotent import parse_rational, render_bipotent
from .core import st_eval_expr, st_render
from .errors import ParseError, Refutation, SupertropicalError
from .polynomials import (
    SparsePoly,
    corner_locus_grid,
    grid_points,
    parse_grid,
    parse_poly,
    render_poly,
    tilde_map,
    tilde_v,
)
from .supervaluations import (
    DEFAULT_FRAGMENT_DEPTH,
    DEFAULT_FRAGMENT_SIZE,
    check_cover,
    gs_strong_check,
    is_strong,
    is_tangible,
    load_witness,
    make_supervaluation,
    verify_dominance,
)
from .valuations import (
    Pair,
    SourceKind,
    check_valuation_axioms,
    classify_strict_strong,
    parse_valuation_spec,
    random_pairs,
)

Flags = t.Dict[t.Union[str, t.Tuple[str, ...]], t.Tuple[t.Union[t.Dict[str, t.Any], Config], str]]

SEED_ENV = "SUPERTROPICAL_SEED"
EXIT_ERROR = 1
EXIT_REFUTED = 2

flags: Flags = dict(base_flags)


class SupertropicalBaseApp(JupyterApp):
    """Shared traits and error handling of every subcommand."""

    version = __version__

    seed = Integer(config=True, help=f"Random seed. Defaults to ${SEED_ENV}, or 0.")

    output = Unicode("", config=True, help="Write the report to this file instead of stdout.")

    @default("log_level")
    def _default_log_level(self) -> int:
        return logging.WARN

    @default("seed")
    def _default_seed(self) -> int:
        value = os.environ.get(SEED_ENV, "")
        if not value:
            return 0
        try:
            return int(value)
        except ValueError:
            self.log.warning("Ignoring non-integer %s=%r", SEED_ENV, value)
            return 0

    def parse_command_line(self, argv: list[str] | None = None) -> None:
        # argparse exits with 2 on usage errors; 2 means a refutation here
        try:
            super().parse_command_line(argv)
        except SystemExit as e:
            if e.code == 2:
                self.exit(EXIT_ERROR)
            raise

    @contextlib.contextmanager
    def open_output(self, path: str | None = None) -> t.Iterator[t.TextIO]:
        target = self.output if path is None else path
        if not target:
            yield sys.stdout
            return
        with Path(target).open("w", encoding="utf-8", newline="") as f:
            yield f

    def run(self) -> None:
        """Do the subcommand's work; errors become exit codes in :meth:`start`."""
        names = ", ".join(sorted(self.subcommands))
        self.log.error("Expected a subcommand, one of: %s", names)
        self.exit(EXIT_ERROR)

    def start(self) -> None:
        if self.subapp is not None or self.generate_config:
            super().start()
            return
        try:
            self.run()
        except Refutation as e:
            self.log.error("Refuted: %s", e)
            self.exit(EXIT_REFUTED)
        except (SupertropicalError, OSError) as e:
            self.log.error("%s", e)
            self.exit(EXIT_ERROR)


class EvalApp(SupertropicalBaseApp):
    name = "supertropical-eval"
    description = "Evaluate an expression over the supertropical semifield, e.g. 't2 + t2'."

    aliases = {**base_aliases, "expr": "EvalApp.expr", "output": "EvalApp.output"}
    flags = flags

    expr = Unicode("", config=True, help="Expression over element literals 0, t<q>, g<q>.")

    def run(self) -> None:
        if not self.expr.strip():
            reason = "empty expression"
            raise ParseError(reason, self.expr, 0)
        value = st_eval_expr(self.expr)
        self.log.debug("%s = %r", self.expr, value)
        with self.open_output() as out:
            out.write(st_render(value) + "\n")


class AuditApp(SupertropicalBaseApp):
    name = "supertropical-audit"
    description = """Audit a finite operation table for the semiring and supertropical axioms.

    With --target, list every semiring homomorphism from --table into --target.
    """

    aliases = {
        **base_aliases,
        "table": "AuditApp.table",
        "target": "AuditApp.target",
        "max-size": "AuditApp.max_size",
        "output": "AuditApp.output",
    }
    flags = flags

    table = Unicode("", config=True, help="JSON file with names, zero, one, add and mul.")

    target = Unicode("", config=True, help="Second table; search homomorphisms into it.")

    max_size = Integer(
        lab.DEFAULT_MAX_SOURCE_SIZE, config=True, help="Largest source table the search accepts."
    )

    max_candidates = Integer(
        lab.DEFAULT_MAX_CANDIDATES, config=True, help="Largest number of candidate maps to try."
    )

    def run(self) -> None:
        if not self.table:
            reason = "--table is required"
            raise ParseError(reason, "", None)
        table = lab.FiniteSemiringTable.load(self.table)
        if self.target:
            target = lab.FiniteSemiringTable.load(self.target)
            maps = lab.find_homomorphisms(
                table,
                target,
                max_size=self.max_size,
                max_candidates=self.max_candidates,
                logger=self.log,
            )
            result: dict[str, t.Any] = {
                "source": list(table.names),
                "target": list(target.names),
                "count": len(maps),
                "homomorphisms": [lab.render_map(table, target, m) for m in maps],
            }
        else:
            report = lab.audit_supertropical(table)
            result = report.to_json()
            result["order"] = [check.to_json() for check in lab.audit_bipotent(table)]
            if report.supertropical:
                result["gs_order"] = [check.to_json() for check in lab.check_gs_partial_order(table)]
            self.log.info("%d laws hold, %d fail", len(report.passed), len(report.failed))
        with self.open_output() as out:
            reports.write_json(result, out)


class _SampledApp(SupertropicalBaseApp):
    """Traits for subcommands that check laws on sample pairs."""

    valuation = Unicode("padic:2", config=True, help="'padic:<p>' or 'trivial'.")

    source = Enum(
        [kind.value for kind in SourceKind],
        SourceKind.Q.value,
        config=True,
        help="Source semiring: Q or Qplus (sums of squares).",
    )

    random = Integer(1000, config=True, help="Number of random sample pairs.")

    pairs = Unicode("", config=True, help="Explicit pairs 'a,b;c,d' used instead of random ones.")

    def sample_pairs(self) -> list[Pair]:
        if self.pairs.strip():
            result = []
            for chunk in self.pairs.split(";"):
                a, sep, b = chunk.partition(",")
                if not sep:
                    reason = "expected pairs written a,b;c,d"
                    raise ParseError(reason, self.pairs, None)
                result.append((parse_rational(a), parse_rational(b)))
            return result
        v = parse_valuation_spec(self.valuation, self.source)
        p = int(v.params.get("p", 2))
        return random_pairs(random.Random(self.seed), self.random, SourceKind(self.source), p)


class ValuationApp(_SampledApp):
    name = "supertropical-valuation"
    description = "Check the valuation axioms and classify strict/strong on samples."

    aliases = {
        **base_aliases,
        "valuation": "ValuationApp.valuation",
        "source": "ValuationApp.source",
        "random": "ValuationApp.random",
        "pairs": "ValuationApp.pairs",
        "seed": "ValuationApp.seed",
        "output": "ValuationApp.output",
    }
    flags = flags

    def run(self) -> None:
        v = parse_valuation_spec(self.valuation, self.source)
        samples = self.sample_pairs()
        axioms = check_valuation_axioms(v, samples)
        classification = classify_strict_strong(v, samples)
        with self.open_output() as out:
            reports.write_json(
                {"axioms": axioms.to_json(), "classification": classification.to_json()}, out
            )


class SupervaluationApp(_SampledApp):
    name = "supertropical-supervaluation"
    description = """Check a supervaluation on samples.

    Actions: check-cover, check-tangible, check-strong, check-gs-strong and
    verify-dominance (reads --witness).
    """
    examples = """
    supertropical supervaluation --kind tangible --valuation padic:2 check-cover
    supertropical supervaluation --witness dominance.json verify-dominance
    """

    aliases = {
        **base_aliases,
        "kind": "SupervaluationApp.kind",
        "valuation": "SupervaluationApp.valuation",
        "source": "SupervaluationApp.source",
        "random": "SupervaluationApp.random",
        "pairs": "SupervaluationApp.pairs",
        "seed": "SupervaluationApp.seed",
        "witness": "SupervaluationApp.witness",
        "max-size": "SupervaluationApp.max_size",
        "output": "SupervaluationApp.output",
    }
    flags = flags

    actions = ("check-cover", "check-tangible", "check-strong", "check-gs-strong", "verify-dominance")

    kind = Enum(["tangible", "ghost"], "tangible", config=True, help="Which supervaluation.")

    witness = Unicode("", config=True, help="JSON dominance witness for verify-dominance.")

    depth = Integer(DEFAULT_FRAGMENT_DEPTH, config=True, help="Fragment closure depth.")

    max_size = Integer(DEFAULT_FRAGMENT_SIZE, config=True, help="Largest fragment accepted.")

    def run(self) -> None:
        if len(self.extra_args) != 1 or self.extra_args[0] not in self.actions:
            reason = f"expected exactly one action out of {', '.join(self.actions)}"
            raise ParseError(reason, " ".join(self.extra_args), None)
        action = self.extra_args[0]
        if action == "verify-dominance":
            if not self.witness:
                reason = "verify-dominance needs --witness"
                raise ParseError(reason, "", None)
            report = verify_dominance(load_witness(self.witness), self.depth, self.max_size)
        else:
            phi = make_supervaluation(self.kind, parse_valuation_spec(self.valuation, self.source))
            samples = self.sample_pairs()
            if action == "check-cover":
                report = check_cover(phi, samples)
            elif action == "check-tangible":
                report = is_tangible(phi, sorted({x for pair in samples for x in pair}))
            elif action == "check-strong":
                report = is_strong(phi, samples)
            else:
                report = gs_strong_check(phi, samples)
        self.log.info("%s: %d checked, passed=%s", report.check, report.checked, report.passed)
        with self.open_output() as out:
            reports.write_json(report.to_json(), out)


class TropicalizeApp(SupertropicalBaseApp):
    name = "supertropical-tropicalize"
    description = "Apply a valuation (or a supervaluation) to the coefficients of a polynomial."

    aliases = {
        **base_aliases,
        "poly": "TropicalizeApp.poly",
        "valuation": "TropicalizeApp.valuation",
        "source": "TropicalizeApp.source",
        "kind": "TropicalizeApp.kind",
        "output": "TropicalizeApp.output",
    }
    flags = flags

    poly = Unicode("", config=True, help="Polynomial such as 'x^2-6*x+8'.")

    valuation = Unicode("padic:2", config=True, help="'padic:<p>' or 'trivial'.")

    source = Enum([kind.value for kind in SourceKind], SourceKind.Q.value, config=True)

    kind = Enum(
        ["valuation", "tangible", "ghost"],
        "valuation",
        config=True,
        help="Apply v itself, or the tangible or ghost supervaluation over v.",
    )

    def run(self) -> None:
        f = parse_poly(self.poly)
        v = parse_valuation_spec(self.valuation, self.source)
        if self.kind == "valuation":
            lifted: SparsePoly[t.Any] = tilde_v(v, f)
        else:
            lifted = tilde_map(make_supervaluation(self.kind, v), f)
        with self.open_output() as out:
            reports.write_json(
                {
                    "poly": render_poly(f),
                    "kind": self.kind,
                    **v.describe(),
                    "coefficients": lifted.to_json(),
                },
                out,
            )


class CornerLocusApp(SupertropicalBaseApp):
    name = "supertropical-corner-locus"
    description = "Sample the corner locus of the tropicalized polynomial on a grid."
    examples = """
    supertropical corner-locus --poly "x^2-6*x+8" --valuation padic:2 --grid x=-4..1:1
    supertropical corner-locus --poly "x-y" --grid x=-3..3,y=-3..3 --svg locus.svg
    """

    aliases = {
        **base_aliases,
        "poly": "CornerLocusApp.poly",
        "valuation": "CornerLocusApp.valuation",
        "source": "CornerLocusApp.source",
        "grid": "CornerLocusApp.grid",
        "csv": "CornerLocusApp.csv",
        "svg": "CornerLocusApp.svg",
        "max-size": "CornerLocusApp.max_points",
        "output": "CornerLocusApp.output",
    }
    flags = flags

    poly = Unicode("", config=True, help="Polynomial such as 'x^2-6*x+8'.")

    valuation = Unicode("padic:2", config=True, help="'padic:<p>' or 'trivial'.")

    source = Enum([kind.value for kind in SourceKind], SourceKind.Q.value, config=True)

    grid = Unicode("", config=True, help="Grid such as 'x=-4..1:1,y=-2..2:1/2'.")

    csv = Unicode("", config=True, help="Also write 'point,member' rows to this file.")

    svg = Unicode("", config=True, help="Also plot the members (two variables only).")

    max_points = Integer(10**6, config=True, help="Largest grid accepted.")

    def run(self) -> None:
        f = parse_poly(self.poly)
        v = parse_valuation_spec(self.valuation, self.source)
        g = tilde_v(v, f)
        axes = parse_grid(self.grid)
        if len(axes) != f.nvars:
            reason = f"the grid has {len(axes)} axes for {f.nvars} variables"
            raise ParseError(reason, self.grid, None)
        points = grid_points(axes, self.max_points)
        members = corner_locus_grid(g, points)
        if self.csv:
            with self.open_output(self.csv) as out:
                reports.write_csv(points, set(members), out)
        if self.svg:
            with self.open_output(self.svg) as out:
                reports.emit_svg(members, out)
        with self.open_output() as out:
            reports.write_json(
                {
                    "poly": render_poly(f),
                    **v.describe(),
                    "tropical": g.to_json(),
                    "grid": self.grid,
                    "points": len(points),
                    "members": [[render_bipotent(x) for x in point] for point in members],
                },
                out,
            )


class Theorem51App(SupertropicalBaseApp):
    name = "supertropical-verify-theorem51"
    description = """Check the ghost-surpassing identity on generated instances.

    Writes one JSON line per instance; exits with 2 if any instance refutes it.
    """

    aliases = {
        **base_aliases,
        "p": "Theorem51App.primes",
        "count": "Theorem51App.count",
        "seed": "Theorem51App.seed",
        "nvars": "Theorem51App.nvars",
        "degree": "Theorem51App.degree",
        "jobs": "Theorem51App.jobs",
        "output": "Theorem51App.output",
    }
    flags = flags

    primes = List(Integer(), [2, 3, 5], config=True, help="Primes of the p-adic valuations.")

    count = Integer(1000, config=True, help="Number of instances.")

    nvars = List(Integer(), list(kapranov.SUPPORTED_NVARS), config=True, help="Variable counts.")

    degree = Integer(kapranov.MAX_DEGREE, config=True, help="Largest polynomial degree.")

    jobs = Integer(1, config=True, help="Worker processes; the report does not depend on it.")

    def run(self) -> None:
        instances = kapranov.generate_theorem51_instances(
            self.seed, self.count, self.primes, self.nvars, self.degree
        )
        records = kapranov.run_suite(instances, kapranov.check_theorem51, self.jobs, self.log)
        with self.open_output() as out:
            reports.write_jsonl(records, out)
        self.log.info(
            "%d instances, %d at roots",
            len(records),
            sum(1 for record in records if record["root"]),
        )
        kapranov.ensure_no_refutation(records, "ghost-surpassing identity")


class KapranovApp(SupertropicalBaseApp):
    name = "supertropical-verify-kapranov"
    description = """Check that valuations of roots lie on the corner locus.

    Either one polynomial with --poly and --root, or --count generated instances.
    """

    aliases = {
        **base_aliases,
        "poly": "KapranovApp.poly",
        "root": "KapranovApp.root",
        "p": "KapranovApp.p",
        "valuation": "KapranovApp.valuation",
        "count": "KapranovApp.count",
        "seed": "KapranovApp.seed",
        "nvars": "KapranovApp.nvars",
        "degree": "KapranovApp.degree",
        "jobs": "KapranovApp.jobs",
        "output": "KapranovApp.output",
    }
    flags = flags

    poly = Unicode("", config=True, help="Polynomial; leave empty to generate instances.")

    root = Unicode("", config=True, help="Comma-separated root coordinates, e.g. '3,3'.")

    p = Integer(2, config=True, help="Prime of the p-adic valuation.")

    valuation = Unicode("", config=True, help="Overrides --p, e.g. 'trivial'.")

    count = Integer(100, config=True, help="Number of generated instances.")

    nvars = Integer(1, config=True, help="Variables of generated instances (1 or 2).")

    degree = Integer(2, config=True, help="Degree of generated instances.")

    jobs = Integer(1, config=True, help="Worker processes; the report does not depend on it.")

    def run(self) -> None:
        if self.poly:
            v = parse_valuation_spec(self.valuation or f"padic:{self.p}")
            f = parse_poly(self.poly)
            root = tuple(parse_rational(x) for x in self.root.split(","))
            instances = [kapranov.KapranovInstance(f, root, v)]
        else:
            instances = kapranov.generate_root_instances(
                self.seed, self.count, self.p, self.nvars, self.degree
            )
        records = kapranov.run_suite(instances, kapranov.check_kapranov, self.jobs, self.log)
        with self.open_output() as out:
            reports.write_jsonl(records, out)
        kapranov.ensure_no_refutation(records, "Kapranov containment")


class VerifyApp(SupertropicalBaseApp):
    name = "supertropical-verify"
    description = "Machine-check proved statements on generated or given instances."

    subcommands: dict[str, t.Any] = {
        "theorem51": (Theorem51App, Theorem51App.description.splitlines()[0]),
        "kapranov": (KapranovApp, KapranovApp.description.splitlines()[0]),
    }


class SupertropicalApp(SupertropicalBaseApp):
    name = "supertropical"
    description = """Supertropical arithmetic, valuations and the ghost-surpassing Kapranov identity.

    Every subcommand writes a JSON report (JSON lines for batches) to stdout
    or --output. Exit codes: 0 pass, 1 usage or input error, 2 refutation.
    """
    examples = """
    supertropical eval --expr "t2 + t2"
    supertropical tropicalize --poly "x^2-6*x+8" --valuation padic:2
    supertropical verify theorem51 --count 1000 --seed 7
    """

    subcommands: dict[str, t.Any] = {
        "eval": (EvalApp, EvalApp.description),
        "audit": (AuditApp, AuditApp.description.splitlines()[0]),
        "valuation": (ValuationApp, ValuationApp.description),
        "supervaluation": (SupervaluationApp, SupervaluationApp.description.splitlines()[0]),
        "tropicalize": (TropicalizeApp, TropicalizeApp.description),
        "corner-locus": (CornerLocusApp, CornerLocusApp.description),
        "verify": (VerifyApp, VerifyApp.description),
    }


APPS: tuple[type[SupertropicalBaseApp], ...] = (
    SupertropicalApp,
    VerifyApp,
    EvalApp,
    AuditApp,
    ValuationApp,
    SupervaluationApp,
    TropicalizeApp,
    CornerLocusApp,
    Theorem51App,
    KapranovApp,
)


def main(argv: list[str] | None = None) -> None:
    """Entry point of the ``supertropical`` script."""
    for app in APPS:
        app.clear_instance()
    SupertropicalApp.launch_instance(argv)
