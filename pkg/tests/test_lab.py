import itertools
import json
import random
import threading

import pytest

from supertropical import lab
from supertropical.errors import Cancelled, PreconditionError, SizeBoundError, TableError
from supertropical.lab import FiniteSemiringTable

FIXTURES = {
    "boolean": lab.boolean_semifield,
    "trivial_supertropical": lab.supertropical_trivial,
    "broken_distributivity": lab.broken_distributivity,
    "integers_mod_two": lab.integers_mod_two,
    "tangible_square_ghost": lab.tangible_square_ghost,
}


def brute_force_supertropical(table):
    """An independent audit working on labels instead of indices."""
    names = table.names
    zero, one = table.label(table.zero), table.label(table.one)

    def add(a, b):
        return table.label(table.add[table.index(a)][table.index(b)])

    def mul(a, b):
        return table.label(table.mul[table.index(a)][table.index(b)])

    triples = list(itertools.product(names, repeat=3))
    semiring = (
        all(add(add(a, b), c) == add(a, add(b, c)) for a, b, c in triples)
        and all(mul(mul(a, b), c) == mul(a, mul(b, c)) for a, b, c in triples)
        and all(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)) for a, b, c in triples)
        and all(add(a, b) == add(b, a) and mul(a, b) == mul(b, a) for a, b, _ in triples)
        and all(add(zero, a) == a and mul(one, a) == a and mul(zero, a) == zero for a in names)
    )
    e = add(one, one)

    def ghost(x):
        return mul(e, x)

    ideal = {ghost(x) for x in names}
    st1 = mul(e, e) == e and add(e, e) == e
    st2 = all(add(a, b) in (a, b) and mul(a, b) in ideal for a in ideal for b in ideal)
    st3 = st4 = True
    for x, y in itertools.product(names, repeat=2):
        gx, gy = ghost(x), ghost(y)
        if gx != gy and add(gx, gy) == gy and add(x, y) != y:
            st3 = False
        if gx == gy and add(x, y) != gx:
            st4 = False
    return semiring, semiring and st1 and st2 and st3 and st4


def random_table(rng, n):
    """A commutative table with 0 and 1 behaving as units, otherwise random."""
    names = [str(i) for i in range(n)]
    add = [[0] * n for _ in range(n)]
    mul = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i == 0:
                add[i][j] = add[j][i] = j
                mul[i][j] = mul[j][i] = 0
            elif i == 1:
                add[i][j] = add[j][i] = rng.randrange(1, n) if j > 0 else 1
                mul[i][j] = mul[j][i] = j
            else:
                add[i][j] = add[j][i] = rng.randrange(1, n)
                mul[i][j] = mul[j][i] = rng.randrange(1, n)
    labels = [[names[k] for k in row] for row in add], [[names[k] for k in row] for row in mul]
    return FiniteSemiringTable.from_labels(names, "0", "1", *labels)


def relabel(table, rng):
    order = list(range(table.n))
    rng.shuffle(order)
    position = {old: new for new, old in enumerate(order)}
    names = tuple(table.names[i] for i in order)
    add = tuple(tuple(position[table.add[i][j]] for j in order) for i in order)
    mul = tuple(tuple(position[table.mul[i][j]] for j in order) for i in order)
    return FiniteSemiringTable(names, add, mul, position[table.zero], position[table.one])


def test_table_from_json(data_dir, load_table):
    table = load_table("trivial_supertropical")
    assert table.names == ("0", "1", "e")
    assert table.label(table.add[table.one][table.one]) == "e"
    data = json.loads((data_dir / "trivial_supertropical.json").read_text(encoding="utf-8"))
    assert table.to_json() == data
    assert FiniteSemiringTable.from_json(table.to_json()) == table


@pytest.mark.parametrize(
    "data",
    [
        {"names": ["0", "1"], "zero": "0", "one": "1", "add": [["0", "1"]], "mul": [["0", "0"], ["0", "1"]]},
        {"names": ["0", "0"], "zero": "0", "one": "0", "add": [], "mul": []},
        {"names": ["0", "1"], "zero": "0", "one": "2", "add": [["0", "1"], ["1", "1"]], "mul": [["0", "0"], ["0", "1"]]},
        {"names": ["0", "1"], "zero": "0", "one": "1", "add": [["0", "1"], ["1", "x"]], "mul": [["0", "0"], ["0", "1"]]},
        {"names": ["0", "1"], "zero": "0", "add": [], "mul": []},
    ],
)
def test_invalid_tables(data):
    with pytest.raises(TableError):
        FiniteSemiringTable.from_json(data)


@pytest.mark.parametrize(
    ("key", "value"),
    [
        ("add", "01"),
        ("add", {"0": ["0", "1"]}),
        ("mul", ["00", "01"]),
        ("mul", None),
        ("names", "01"),
    ],
)
def test_table_json_shapes(key, value):
    data = lab.boolean_semifield().to_json()
    data[key] = value
    with pytest.raises(TableError, match="must be a list"):
        FiniteSemiringTable.from_json(data)


def test_invalid_json_file(tmp_path):
    path = tmp_path / "table.json"
    path.write_text("[1, 2", encoding="utf-8")
    with pytest.raises(TableError):
        FiniteSemiringTable.load(path)


def test_boolean_semifield():
    report = lab.audit_supertropical(lab.boolean_semifield())
    assert report.semiring
    assert report.supertropical
    assert report.st5
    assert report.semifield
    assert report.bipotent
    assert report.e == "1"
    assert report.tangibles == []
    assert report.ghosts == ["1"]
    assert not report.failed


def test_trivial_supertropical():
    report = lab.audit_supertropical(lab.supertropical_trivial())
    assert report.supertropical
    assert report.e == "e"
    assert report.tangibles == ["1"]
    assert report.ghosts == ["e"]
    assert report.semifield
    assert report.bipotent is False
    assert report.law("bipotent_iff_no_tangibles").passed
    assert report.law("zero_sum_free").passed
    data = report.to_json()
    assert data["supertropical"] is True
    assert data["tangibles"] == ["1"]


def test_broken_distributivity():
    report = lab.audit_supertropical(lab.broken_distributivity())
    assert not report.semiring
    assert not report.supertropical
    distributive = report.law("distributive")
    assert not distributive.passed
    assert distributive.witness == ("a", "1", "a")
    assert report.failed[0].law == "distributive"


def test_ghost_kernel_breaks_st4():
    report = lab.audit_supertropical(lab.integers_mod_two())
    assert report.semiring
    assert not report.supertropical
    assert report.e == "0"
    assert [check.law for check in report.failed] == ["ST4", "ghost_kernel", "zero_sum_free"]
    st4 = report.law("ST4")
    assert st4.witness == ("0", "1")
    assert st4.note == (
        "ex = ey must give x+y = ex; ex = 0 forces x = 0 under this axiom, violated by 1"
    )
    kernel = report.law("ghost_kernel")
    assert kernel.witness == ("1",)
    assert kernel.note == "ex = 0 must imply x = 0"
    assert report.law("zero_sum_free").witness == ("1", "1")
    assert report.law("ST3").passed


def test_tangible_product_in_ghosts_fails_st5_only():
    report = lab.audit_supertropical(lab.tangible_square_ghost())
    assert report.supertropical
    assert report.st5 is False
    assert report.semifield is False
    assert report.tangibles == ["1", "a"]
    assert report.ghosts == ["e"]
    assert [check.law for check in report.failed] == ["ST5"]
    st5 = report.law("ST5")
    assert st5.witness == ("a", "a")
    assert st5.note == "T*T must lie in T and G*G in G"


@pytest.mark.parametrize("name", ["integers_mod_two", "tangible_square_ghost"])
def test_fixture_files_match_builders(load_table, name):
    assert load_table(name) == FIXTURES[name]()


def test_audit_bipotent():
    laws = {check.law: check for check in lab.audit_bipotent(lab.boolean_semifield())}
    assert all(check.passed for check in laws.values())
    laws = {check.law: check for check in lab.audit_bipotent(lab.supertropical_trivial())}
    assert not laws["bipotent"].passed
    assert laws["bipotent"].witness == ("1", "1")


def test_gs_partial_order():
    table = lab.supertropical_trivial()
    relation = lab.gs_relation(table)
    e, one, zero = table.index("e"), table.index("1"), table.index("0")
    assert (e, one) in relation
    assert (e, zero) in relation
    assert (one, zero) not in relation
    assert all(check.passed for check in lab.check_gs_partial_order(table))


def test_audit_agrees_with_brute_force():
    rng = random.Random(11)
    tables = [fixture() for fixture in FIXTURES.values()]
    tables += [relabel(fixture(), rng) for fixture in FIXTURES.values() for _ in range(10)]
    tables += [random_table(rng, rng.randint(2, 4)) for _ in range(200)]
    for table in tables:
        report = lab.audit_supertropical(table)
        semiring, supertropical = brute_force_supertropical(table)
        assert report.semiring == semiring, table
        assert report.supertropical == supertropical, table


def exhaustive_homomorphisms(src, dst):
    found = []
    for image in itertools.product(range(dst.n), repeat=src.n):
        if image[src.zero] != dst.zero or image[src.one] != dst.one:
            continue
        if all(
            image[src.add[a][b]] == dst.add[image[a]][image[b]]
            and image[src.mul[a][b]] == dst.mul[image[a]][image[b]]
            for a in range(src.n)
            for b in range(src.n)
        ):
            found.append(image)
    return found


@pytest.mark.parametrize(("src", "dst"), list(itertools.product(FIXTURES, repeat=2)))
def test_homomorphisms_match_exhaustive_search(src, dst):
    source, target = FIXTURES[src](), FIXTURES[dst]()
    if "broken_distributivity" in (src, dst):
        with pytest.raises(PreconditionError):
            lab.find_homomorphisms(source, target)
        return
    assert lab.find_homomorphisms(source, target) == exhaustive_homomorphisms(source, target)


def test_homomorphisms_named():
    trivial, boolean = lab.supertropical_trivial(), lab.boolean_semifield()
    maps = lab.find_homomorphisms(trivial, boolean)
    assert [lab.render_map(trivial, boolean, m) for m in maps] == [{"0": "0", "1": "1", "e": "1"}]
    assert lab.find_homomorphisms(boolean, trivial) == []


def test_homomorphism_bounds():
    trivial = lab.supertropical_trivial()
    with pytest.raises(SizeBoundError):
        lab.find_homomorphisms(trivial, trivial, max_size=2)
    with pytest.raises(SizeBoundError):
        lab.find_homomorphisms(trivial, trivial, max_candidates=2)


def test_homomorphism_cancel():
    cancel = threading.Event()
    cancel.set()
    boolean = lab.boolean_semifield()
    with pytest.raises(Cancelled):
        lab.find_homomorphisms(boolean, boolean, cancel=cancel)
