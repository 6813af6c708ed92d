"""Audit finite operation tables for the semiring and supertropical axioms.

A table is given by element labels, an addition table, a multiplication
table and the labels of ``0`` and ``1``. Every failed law carries a witness
tuple of labels that can be checked by looking entries up in the tables.
"""
from __future__ import annotations

import itertools
import json
import logging
import threading
import typing as t
from dataclasses import dataclass, field
from pathlib import Path

from .errors import Cancelled, PreconditionError, SizeBoundError, TableError

log = logging.getLogger(__name__)

Table = t.Tuple[t.Tuple[int, ...], ...]
IndexMap = t.Tuple[int, ...]

DEFAULT_MAX_SOURCE_SIZE = 12
DEFAULT_MAX_CANDIDATES = 10**7
_CANCEL_POLL = 1024


@dataclass(frozen=True)
class FiniteSemiringTable:
    """A finite candidate semiring with index-valued operation tables."""

    names: tuple[str, ...]
    add: Table
    mul: Table
    zero: int
    one: int

    def __post_init__(self) -> None:
        n = len(self.names)
        if n == 0:
            msg = "a table needs at least one element"
            raise TableError(msg)
        if len(set(self.names)) != n:
            msg = f"duplicate element names in {list(self.names)}"
            raise TableError(msg)
        for label, table in (("add", self.add), ("mul", self.mul)):
            if len(table) != n or any(len(row) != n for row in table):
                msg = f"the {label} table must be {n}x{n}"
                raise TableError(msg)
            for i, row in enumerate(table):
                for j, entry in enumerate(row):
                    if not 0 <= entry < n:
                        msg = f"{label}[{i}][{j}] = {entry} is out of range"
                        raise TableError(msg)
        for label, index in (("zero", self.zero), ("one", self.one)):
            if not 0 <= index < n:
                msg = f"{label} index {index} is out of range"
                raise TableError(msg)
        if self.zero == self.one and n != 1:
            msg = "zero and one coincide in a table with more than one element"
            raise TableError(msg)

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            msg = f"unknown element {name!r}"
            raise TableError(msg) from None

    def label(self, index: int) -> str:
        return self.names[index]

    @classmethod
    def from_labels(
        cls,
        names: t.Sequence[str],
        zero: str,
        one: str,
        add: t.Sequence[t.Sequence[str]],
        mul: t.Sequence[t.Sequence[str]],
    ) -> FiniteSemiringTable:
        """Build a table from row-major label matrices."""
        labels = tuple(str(name) for name in names)
        lookup = {name: i for i, name in enumerate(labels)}

        def convert(label: str, matrix: t.Sequence[t.Sequence[str]]) -> Table:
            rows = []
            for i, row in enumerate(matrix):
                converted = []
                for j, entry in enumerate(row):
                    if str(entry) not in lookup:
                        msg = f"{label}[{i}][{j}] = {entry!r} is not an element name"
                        raise TableError(msg)
                    converted.append(lookup[str(entry)])
                rows.append(tuple(converted))
            return tuple(rows)

        for label, name in (("zero", zero), ("one", one)):
            if str(name) not in lookup:
                msg = f"{label} {name!r} is not an element name"
                raise TableError(msg)
        return cls(labels, convert("add", add), convert("mul", mul), lookup[str(zero)], lookup[str(one)])

    @classmethod
    def from_json(cls, data: t.Mapping[str, t.Any]) -> FiniteSemiringTable:
        missing = [key for key in ("names", "zero", "one", "add", "mul") if key not in data]
        if missing:
            msg = f"table JSON is missing {', '.join(missing)}"
            raise TableError(msg)
        if not isinstance(data["names"], list):
            msg = "table JSON names must be a list"
            raise TableError(msg)
        for key in ("add", "mul"):
            matrix = data[key]
            if not isinstance(matrix, list) or not all(isinstance(row, list) for row in matrix):
                msg = f"table JSON {key} must be a list of lists"
                raise TableError(msg)
        return cls.from_labels(data["names"], data["zero"], data["one"], data["add"], data["mul"])

    @classmethod
    def load(cls, path: str | Path) -> FiniteSemiringTable:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            msg = f"{path}: invalid JSON ({e})"
            raise TableError(msg) from e
        if not isinstance(data, dict):
            msg = f"{path}: expected a JSON object"
            raise TableError(msg)
        return cls.from_json(data)

    def to_json(self) -> dict[str, t.Any]:
        return {
            "names": list(self.names),
            "zero": self.label(self.zero),
            "one": self.label(self.one),
            "add": [[self.label(k) for k in row] for row in self.add],
            "mul": [[self.label(k) for k in row] for row in self.mul],
        }


@dataclass
class LawCheck:
    law: str
    passed: bool
    witness: tuple[str, ...] | None = None
    note: str = ""

    def to_json(self) -> dict[str, t.Any]:
        data: dict[str, t.Any] = {"law": self.law, "passed": self.passed}
        if self.witness is not None:
            data["witness"] = list(self.witness)
        if self.note:
            data["note"] = self.note
        return data


@dataclass
class AuditReport:
    """Outcome of auditing one table."""

    names: tuple[str, ...]
    laws: list[LawCheck] = field(default_factory=list)
    e: str | None = None
    tangibles: list[str] = field(default_factory=list)
    ghosts: list[str] = field(default_factory=list)
    semiring: bool = False
    supertropical: bool | None = None
    st5: bool | None = None
    semifield: bool | None = None
    bipotent: bool | None = None

    @property
    def passed(self) -> list[str]:
        return [check.law for check in self.laws if check.passed]

    @property
    def failed(self) -> list[LawCheck]:
        return [check for check in self.laws if not check.passed]

    def law(self, name: str) -> LawCheck:
        for check in self.laws:
            if check.law == name:
                return check
        raise KeyError(name)

    def to_json(self) -> dict[str, t.Any]:
        data: dict[str, t.Any] = {
            "elements": list(self.names),
            "laws": [check.to_json() for check in self.laws],
            "semiring": self.semiring,
        }
        if self.supertropical is not None:
            data.update(
                {
                    "supertropical": self.supertropical,
                    "st5": self.st5,
                    "semifield": self.semifield,
                    "bipotent": self.bipotent,
                    "e": self.e,
                    "tangibles": self.tangibles,
                    "ghosts": self.ghosts,
                }
            )
        return data


def _first(
    table: FiniteSemiringTable,
    arity: int,
    holds: t.Callable[..., bool],
) -> tuple[str, ...] | None:
    """Labels of the first index tuple where ``holds`` fails, if any."""
    for args in itertools.product(range(table.n), repeat=arity):
        if not holds(*args):
            return tuple(table.label(i) for i in args)
    return None


def _law(name: str, witness: tuple[str, ...] | None, note: str = "") -> LawCheck:
    return LawCheck(name, witness is None, witness, note if witness is not None else "")


def semiring_laws(table: FiniteSemiringTable) -> list[LawCheck]:
    add, mul, zero, one = table.add, table.mul, table.zero, table.one
    return [
        _law("add_associative", _first(table, 3, lambda a, b, c: add[add[a][b]][c] == add[a][add[b][c]])),
        _law("mul_associative", _first(table, 3, lambda a, b, c: mul[mul[a][b]][c] == mul[a][mul[b][c]])),
        _law("add_commutative", _first(table, 2, lambda a, b: add[a][b] == add[b][a])),
        _law("mul_commutative", _first(table, 2, lambda a, b: mul[a][b] == mul[b][a])),
        _law("add_unit", _first(table, 1, lambda a: add[zero][a] == a and add[a][zero] == a)),
        _law("mul_unit", _first(table, 1, lambda a: mul[one][a] == a and mul[a][one] == a)),
        _law("absorbing_zero", _first(table, 1, lambda a: mul[zero][a] == zero and mul[a][zero] == zero)),
        _law(
            "distributive",
            _first(table, 3, lambda a, b, c: mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]),
        ),
    ]


def audit_semiring(table: FiniteSemiringTable) -> AuditReport:
    """Check the commutative-semiring laws on every pair and triple."""
    laws = semiring_laws(table)
    return AuditReport(table.names, laws, semiring=all(law.passed for law in laws))


def ghost_ideal(table: FiniteSemiringTable) -> list[int]:
    """Indices of eU where ``e = 1 + 1``, in table order."""
    e = table.add[table.one][table.one]
    return sorted({table.mul[e][x] for x in range(table.n)})


def audit_bipotent(table: FiniteSemiringTable) -> list[LawCheck]:
    """Bipotency and the induced order ``a ≤ b ⟺ a + b = b``."""
    add, mul = table.add, table.mul

    def leq(a: int, b: int) -> bool:
        return add[a][b] == b

    return [
        _law("bipotent", _first(table, 2, lambda a, b: add[a][b] in (a, b))),
        _law("order_total", _first(table, 2, lambda a, b: leq(a, b) or leq(b, a))),
        _law("order_zero_minimal", _first(table, 1, lambda a: leq(table.zero, a))),
        _law(
            "order_mul_compatible",
            _first(table, 3, lambda a, b, c: not leq(a, b) or leq(mul[a][c], mul[b][c])),
        ),
        _law(
            "order_add_compatible",
            _first(table, 3, lambda a, b, c: not leq(a, b) or leq(add[a][c], add[b][c])),
        ),
    ]


def _supertropical_laws(table: FiniteSemiringTable, report: AuditReport) -> None:
    add, mul, zero, one, n = table.add, table.mul, table.zero, table.one, table.n
    label = table.label
    e = add[one][one]
    ghosts_of = [mul[e][x] for x in range(n)]
    ideal = set(ghosts_of)
    report.e = label(e)

    def ghost_leq(a: int, b: int) -> bool:
        return add[a][b] == b

    st1 = None if mul[e][e] == e and add[e][e] == e else (label(e),)
    report.laws.append(_law("ST1", st1, "e = 1+1 must satisfy e*e = e and e+e = e"))

    st2 = None
    for a, b in itertools.product(sorted(ideal), repeat=2):
        if add[a][b] not in (a, b) or add[a][b] not in ideal or mul[a][b] not in ideal:
            st2 = (label(a), label(b))
            break
    report.laws.append(_law("ST2", st2, "eU must be a bipotent subsemiring"))

    st3 = _first(
        table,
        2,
        lambda x, y: not (ghosts_of[x] != ghosts_of[y] and ghost_leq(ghosts_of[x], ghosts_of[y]))
        or add[x][y] == y,
    )
    report.laws.append(_law("ST3", st3, "ex < ey must give x+y = y"))

    kernel = [x for x in range(n) if ghosts_of[x] == zero and x != zero]
    st4 = _first(table, 2, lambda x, y: ghosts_of[x] != ghosts_of[y] or add[x][y] == ghosts_of[x])
    note = "ex = ey must give x+y = ex"
    if st4 is not None and kernel:
        note += "; ex = 0 forces x = 0 under this axiom, violated by " + ", ".join(
            label(x) for x in kernel
        )
    report.laws.append(_law("ST4", st4, note))
    report.laws.append(
        _law("ghost_kernel", (label(kernel[0]),) if kernel else None, "ex = 0 must imply x = 0")
    )

    tangibles = [x for x in range(n) if x not in ideal]
    ghosts = [x for x in sorted(ideal) if x != zero]
    report.tangibles = [label(x) for x in tangibles]
    report.ghosts = [label(x) for x in ghosts]

    st5 = None
    for group in (tangibles, ghosts):
        for a, b in itertools.product(group, repeat=2):
            if mul[a][b] not in group:
                st5 = (label(a), label(b))
                break
        if st5 is not None:
            break
    report.laws.append(_law("ST5", st5, "T*T must lie in T and G*G in G"))

    zero_sum = _first(table, 2, lambda x, y: add[x][y] != zero or (x == zero and y == zero))
    report.laws.append(_law("zero_sum_free", zero_sum, "x+y = 0 must imply x = y = 0"))

    bipotent = _first(table, 2, lambda a, b: add[a][b] in (a, b)) is None
    report.bipotent = bipotent
    mismatch = None if bipotent == (not tangibles) else tuple(report.tangibles)
    report.laws.append(
        _law("bipotent_iff_no_tangibles", mismatch, "a bipotent table must have no tangibles")
    )

    report.semifield = _is_group(table, tangibles, one) and _is_group(table, ghosts, e)
    core = ("ST1", "ST2", "ST3", "ST4")
    report.supertropical = report.semiring and all(report.law(name).passed for name in core)
    report.st5 = st5 is None


def _is_group(table: FiniteSemiringTable, members: list[int], unit: int) -> bool:
    if not members:
        return True
    group = set(members)
    if unit not in group:
        return False
    mul = table.mul
    closed = all(mul[a][b] in group for a in members for b in members)
    invertible = all(any(mul[a][b] == unit for b in members) for a in members)
    return closed and invertible


def audit_supertropical(table: FiniteSemiringTable) -> AuditReport:
    """Audit the semiring laws and ST1-ST5, and extract e, 𝒯 and 𝒢.

    The ST axioms are evaluated even when a semiring law fails, so every
    violation is reported, but ``supertropical`` is only true for semirings.
    ST5 is reported on its own (``st5``) and does not affect ``supertropical``.
    """
    report = audit_semiring(table)
    _supertropical_laws(table, report)
    return report


def gs_relation(table: FiniteSemiringTable) -> set[tuple[int, int]]:
    """All ``(x, y)`` with ``x = y + z`` for some ``z`` in eU."""
    ideal = ghost_ideal(table)
    return {
        (table.add[y][z], y)
        for y in range(table.n)
        for z in ideal
    }


def check_gs_partial_order(table: FiniteSemiringTable) -> list[LawCheck]:
    """Order properties of the ghost-surpassing relation on a supertropical table."""
    relation = gs_relation(table)
    ideal = set(ghost_ideal(table))
    mul = table.mul

    def gs(x: int, y: int) -> bool:
        return (x, y) in relation

    return [
        _law("gs_reflexive", _first(table, 1, lambda x: gs(x, x))),
        _law("gs_antisymmetric", _first(table, 2, lambda x, y: not (gs(x, y) and gs(y, x)) or x == y)),
        _law(
            "gs_transitive",
            _first(table, 3, lambda x, y, z: not (gs(x, y) and gs(y, z)) or gs(x, z)),
        ),
        _law(
            "gs_mul_compatible",
            _first(table, 3, lambda x, y, z: not gs(x, y) or gs(mul[x][z], mul[y][z])),
        ),
        _law(
            "gs_tangible_rigid",
            _first(
                table,
                2,
                lambda x, y: not (x not in ideal or x == table.zero) or not gs(x, y) or x == y,
            ),
        ),
    ]


def find_homomorphisms(
    src: FiniteSemiringTable,
    dst: FiniteSemiringTable,
    *,
    max_size: int = DEFAULT_MAX_SOURCE_SIZE,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    cancel: threading.Event | None = None,
    logger: logging.Logger | None = None,
) -> list[IndexMap]:
    """Every map ``src -> dst`` preserving 0, 1, addition and multiplication.

    Returned maps are tuples ``m`` with ``m[i]`` the image of ``src`` element
    ``i``, in lexicographic order. The search is exhaustive over all maps that
    send 0 to 0 and 1 to 1.
    """
    logger = logger or log
    for name, table in (("source", src), ("target", dst)):
        if not audit_semiring(table).semiring:
            msg = f"the {name} table is not a commutative semiring"
            raise PreconditionError(msg)
    if src.n > max_size:
        msg = f"source has {src.n} elements, above the bound of {max_size}"
        raise SizeBoundError(msg)
    if src.zero == src.one and dst.zero != dst.one:
        return []
    free = [i for i in range(src.n) if i not in (src.zero, src.one)]
    candidates = dst.n ** len(free)
    if candidates > max_candidates:
        msg = f"{candidates} candidate maps exceed the bound of {max_candidates}"
        raise SizeBoundError(msg)
    logger.debug("Searching %d candidate maps from %d to %d elements", candidates, src.n, dst.n)

    found: list[IndexMap] = []
    image = [0] * src.n
    image[src.zero] = dst.zero
    image[src.one] = dst.one
    pairs = list(itertools.product(range(src.n), repeat=2))
    for count, choice in enumerate(itertools.product(range(dst.n), repeat=len(free))):
        if cancel is not None and count % _CANCEL_POLL == 0 and cancel.is_set():
            msg = f"homomorphism search cancelled after {count} candidates"
            raise Cancelled(msg)
        for i, target in zip(free, choice):
            image[i] = target
        if all(
            image[src.add[a][b]] == dst.add[image[a]][image[b]]
            and image[src.mul[a][b]] == dst.mul[image[a]][image[b]]
            for a, b in pairs
        ):
            found.append(tuple(image))
    logger.debug("Found %d homomorphisms", len(found))
    return found


def render_map(src: FiniteSemiringTable, dst: FiniteSemiringTable, image: IndexMap) -> dict[str, str]:
    return {src.label(i): dst.label(j) for i, j in enumerate(image)}


def boolean_semifield() -> FiniteSemiringTable:
    """{0, 1} with 1 + 1 = 1."""
    return FiniteSemiringTable.from_labels(
        ["0", "1"], "0", "1", add=[["0", "1"], ["1", "1"]], mul=[["0", "0"], ["0", "1"]]
    )


def supertropical_trivial() -> FiniteSemiringTable:
    """{0, 1, e}: the supertropical semifield over the trivial group."""
    return FiniteSemiringTable.from_labels(
        ["0", "1", "e"],
        "0",
        "1",
        add=[["0", "1", "e"], ["1", "e", "e"], ["e", "e", "e"]],
        mul=[["0", "0", "0"], ["0", "1", "e"], ["0", "e", "e"]],
    )


def broken_distributivity() -> FiniteSemiringTable:
    """The chain 0 < 1 < a with a·a = 1; distributivity fails at (a, 1, a)."""
    return FiniteSemiringTable.from_labels(
        ["0", "1", "a"],
        "0",
        "1",
        add=[["0", "1", "a"], ["1", "1", "a"], ["a", "a", "a"]],
        mul=[["0", "0", "0"], ["0", "1", "a"], ["0", "a", "1"]],
    )


def integers_mod_two() -> FiniteSemiringTable:
    """The ring ℤ/2, where e = 1 + 1 = 0 and so e·1 = 0."""
    return FiniteSemiringTable.from_labels(
        ["0", "1"], "0", "1", add=[["0", "1"], ["1", "0"]], mul=[["0", "0"], ["0", "1"]]
    )


def tangible_square_ghost() -> FiniteSemiringTable:
    """{0, 1, a, e} with a·a = e: supertropical, but 𝒯 is not closed under products."""
    return FiniteSemiringTable.from_labels(
        ["0", "1", "a", "e"],
        "0",
        "1",
        add=[["0", "1", "a", "e"], ["1", "e", "e", "e"], ["a", "e", "e", "e"], ["e", "e", "e", "e"]],
        mul=[["0", "0", "0", "0"], ["0", "1", "a", "e"], ["0", "a", "e", "e"], ["0", "e", "e", "e"]],
    )
