from fractions import Fraction

import pytest

from supertropical.core import E, ONE, ZERO, SupertropicalElem
from supertropical.errors import ParseError, SizeBoundError
from supertropical.supervaluations import (
    DominanceWitness,
    GhostMapTransmission,
    IdentityTransmission,
    RuleSupervaluation,
    TableTransmission,
    check_cover,
    fragment,
    fragment_levels,
    ghost_supervaluation,
    gs_strong_check,
    is_strong,
    is_tangible,
    load_witness,
    make_supervaluation,
    parse_transmission,
    tangible_lift,
    verify_dominance,
    verify_equivalence,
)
from supertropical.valuations import padic_valuation, random_pairs, trivial_valuation

T = SupertropicalElem.tangible
G = SupertropicalElem.ghost
V2 = padic_valuation(2)
SAMPLES = tuple(Fraction(a) for a in ("1", "2", "3", "12", "-6", "1/4", "5/8"))


def shifted_rule(a):
    """Tangible values one step above v, except at 1."""
    if a == 1:
        return ONE
    return T(V2(a).value + 1)


SHIFTED = RuleSupervaluation(V2, "shifted", shifted_rule)


def test_tangible_lift_values():
    phi = tangible_lift(V2)
    assert phi(12) == T(-2)
    assert phi(0) == ZERO
    assert phi(1) == ONE
    assert phi.describe() == {"supervaluation": "tangible", "valuation": "padic:2", "source_ring": "Q", "p": 2}


def test_ghost_supervaluation_values():
    phi = ghost_supervaluation(V2)
    assert phi(12) == G(-2)
    assert phi(1) == E
    assert phi(0) == ZERO


def test_make_supervaluation():
    assert make_supervaluation("tangible", V2) == tangible_lift(V2)
    assert make_supervaluation("ghost", V2) == ghost_supervaluation(V2)
    with pytest.raises(ParseError):
        make_supervaluation("sideways", V2)


def test_covers(padic, rng):
    pairs = random_pairs(rng, 300, p=padic.p)
    for phi in (tangible_lift(padic), ghost_supervaluation(padic)):
        report = check_cover(phi, pairs)
        assert report.passed, report.witnesses[:3]
        assert report.checked == 300


def test_shifted_rule_is_not_a_cover():
    report = check_cover(SHIFTED, [(Fraction(2), Fraction(3))])
    assert not report
    laws = {witness.law for witness in report.witnesses}
    assert {"multiplicative", "covers"} <= laws
    data = report.to_json()
    assert data["check"] == "cover"
    assert data["supervaluation"] == "shifted"
    assert data["passed"] is False


def test_is_tangible(rng):
    points = [a for a, _ in random_pairs(rng, 100)]
    assert is_tangible(tangible_lift(V2), points)
    assert is_tangible(SHIFTED, points)
    report = is_tangible(ghost_supervaluation(V2), [Fraction(1), Fraction(2)])
    assert not report
    assert report.witnesses[0].args == ("1",)
    assert is_tangible(tangible_lift(padic_valuation(3)), [0])


def test_strong_checks(padic, trivial, rng):
    for v in (padic, trivial):
        pairs = random_pairs(rng, 500, p=getattr(v, "p", 2))
        phi = tangible_lift(v)
        assert is_strong(phi, pairs)
        assert gs_strong_check(phi, pairs)
        # ghost sums are never tangible, so strength holds vacuously
        assert is_strong(ghost_supervaluation(v), pairs)


def test_strong_failure_is_also_a_gs_failure():
    pair = [(Fraction(1), Fraction(4))]
    strong = is_strong(SHIFTED, pair)
    gs = gs_strong_check(SHIFTED, pair)
    assert not strong
    assert not gs
    assert strong.witnesses[0].args == ("1", "4")
    assert gs.witnesses[0].args == ("1", "4")


def marked_rule(v, q):
    """Keeps ``eφ = v`` but turns values at multiples of ``q`` into ghosts."""

    def rule(a):
        value = v(a).value
        return G(value) if a.numerator % q == 0 else T(value)

    return RuleSupervaluation(v, f"marked{q}", rule)


def test_strong_and_gs_strong_agree_on_many_samples(rng):
    phis = [(tangible_lift(trivial_valuation()), 2), (ghost_supervaluation(trivial_valuation()), 2)]
    for p in (2, 3, 5):
        v = padic_valuation(p)
        q = 5 if p == 3 else 3
        phis += [(tangible_lift(v), p), (ghost_supervaluation(v), p), (marked_rule(v, q), p)]
    verdicts = set()
    for _ in range(10_000):
        phi, p = rng.choice(phis)
        pair = random_pairs(rng, 1, p=p)
        strong = bool(is_strong(phi, pair))
        assert strong == bool(gs_strong_check(phi, pair)), (phi.name, pair)
        verdicts.add(strong)
    assert verdicts == {True, False}


def test_strong_failures_are_gs_failures(rng):
    pairs = random_pairs(rng, 500) + [(Fraction(1), Fraction(4)), (Fraction(3), Fraction(1))]
    strong = {w.args for w in is_strong(SHIFTED, pairs).witnesses}
    gs = {w.args for w in gs_strong_check(SHIFTED, pairs).witnesses}
    assert strong
    assert strong <= gs


def test_fragment_levels():
    phi = tangible_lift(V2)
    levels = fragment_levels(phi, [2], depth=1)
    assert levels[0] == [ZERO, T(-1), T(0), G(-1), G(0)]
    assert set(levels[0]) <= set(levels[1])
    assert T(-2) in levels[1]
    assert fragment(phi, [2], depth=1) == levels[1]


def test_fragment_size_bound():
    with pytest.raises(SizeBoundError):
        fragment(tangible_lift(V2), [1, 2], depth=2, max_size=6)


def test_dominance_by_ghost_map():
    witness = DominanceWitness(tangible_lift(V2), ghost_supervaluation(V2), GhostMapTransmission(), SAMPLES)
    report = verify_dominance(witness)
    assert report.passed, report.witnesses[:3]
    assert report.checked > 0
    data = report.to_json()
    assert data["transmission"] == "ghost_map"
    assert data["source"] == "tangible"


def test_dominance_is_reflexive():
    phi = tangible_lift(V2)
    assert verify_dominance(DominanceWitness(phi, phi, IdentityTransmission(), SAMPLES))


def test_dominance_composes():
    phi = tangible_lift(V2)
    alpha = IdentityTransmission().then(GhostMapTransmission())
    assert alpha.name == "ghost_map o identity"
    assert verify_dominance(DominanceWitness(phi, ghost_supervaluation(V2), alpha, SAMPLES))


@pytest.mark.parametrize("alpha", [IdentityTransmission(), GhostMapTransmission()])
def test_ghost_does_not_dominate_tangible(alpha):
    witness = DominanceWitness(ghost_supervaluation(V2), tangible_lift(V2), alpha, SAMPLES)
    report = verify_dominance(witness)
    assert not report
    assert "unit" in {w.law for w in report.witnesses}


def test_partial_table_transmission():
    alpha = parse_transmission([["0", "0"], ["t0", "g0"]])
    assert isinstance(alpha, TableTransmission)
    assert alpha(T(0)) == G(0)
    assert alpha(T(5)) is None
    report = verify_dominance(
        DominanceWitness(tangible_lift(V2), ghost_supervaluation(V2), alpha, (Fraction(2),))
    )
    assert "defined" in {w.law for w in report.witnesses}


@pytest.mark.parametrize("spec", ["sideways", [["t0"]]])
def test_parse_transmission_errors(spec):
    with pytest.raises(ParseError):
        parse_transmission(spec)


def test_equivalence():
    phi, psi = tangible_lift(V2), ghost_supervaluation(V2)
    assert verify_equivalence(phi, phi, IdentityTransmission(), IdentityTransmission(), SAMPLES)
    report = verify_equivalence(phi, psi, GhostMapTransmission(), IdentityTransmission(), SAMPLES)
    assert not report
    assert report.check == "equivalence"


def test_report_subjects_name_both_supervaluations():
    v3 = padic_valuation(3)
    phi, psi = tangible_lift(v3), ghost_supervaluation(v3)
    dominance = verify_dominance(DominanceWitness(phi, psi, GhostMapTransmission(), SAMPLES)).to_json()
    assert dominance["source"] == "tangible"
    assert dominance["target"] == "ghost"
    assert dominance["transmission"] == "ghost_map"
    assert dominance["valuation"] == "padic:3"
    assert dominance["source_ring"] == "Q"
    assert dominance["p"] == 3
    equivalence = verify_equivalence(
        phi, psi, GhostMapTransmission(), IdentityTransmission(), SAMPLES
    ).to_json()
    assert equivalence["source"] == "tangible"
    assert equivalence["target"] == "ghost"
    assert equivalence["valuation"] == "padic:3"
    assert equivalence["source_ring"] == "Q"


def test_load_witness(data_dir):
    witness = load_witness(data_dir / "dominance_ghost.json")
    assert witness.samples == SAMPLES
    assert load_witness(str(data_dir / "dominance_ghost.json")).samples == SAMPLES
    assert witness.transmission.name == "ghost_map"
    assert verify_dominance(witness)


def test_witness_defaults():
    witness = DominanceWitness.from_json({})
    assert witness.source == tangible_lift(V2)
    assert witness.target == ghost_supervaluation(V2)


def test_load_witness_errors(write_json, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ParseError):
        load_witness(path)
    with pytest.raises(ParseError):
        load_witness(write_json("list.json", [1, 2]))
