from __future__ import annotations

from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liegeom.algebra import catalog
from liegeom.forms import AltForm, pfaffian
from liegeom.scalar import evaluate, parse_scalar, var
from liegeom.verify import (
    THEOREMS,
    Check,
    Family,
    FamilyError,
    FixtureError,
    SamplingError,
    Settings,
    Status,
    Verdict,
    fixture,
    fixture_keys,
    known_discrepancies,
    render_markdown,
    report_document,
    reproduce_theorem,
    sample_family,
    sample_sequence,
)
from liegeom.verify.checks import compare_matrix, rational_function_sqrt, verify_family_semi_para_kahler
from liegeom.verify.report import to_json
from liegeom.verify.theorems import anchor_for

# -- sampling ---------------------------------------------------------------------------


def test_sample_sequence_prefix():
    want = [1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 3, -3, Fraction(1, 3), Fraction(-1, 3),
            Fraction(3, 2), Fraction(-3, 2), Fraction(2, 3), Fraction(-2, 3)]
    assert list(islice(sample_sequence(), len(want))) == want


def test_sample_sequence_has_no_repeats():
    xs = list(islice(sample_sequence(), 400))
    assert len(set(xs)) == len(xs)
    assert 0 not in xs


def family10() -> Family:
    return Family.of("family10", "G2", fixture("G2.family10").value())


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 30))
def test_sampling_is_deterministic_and_respects_constraints(seed):
    f = family10()
    a, b = sample_family(f, seed), sample_family(f, seed)
    assert a.values == b.values
    for c in f.constraints:
        assert evaluate(c, a.values) != 0
    assert pfaffian(a.obj.matrix()) != 0


def test_distinct_seeds_give_distinct_assignments():
    f = family10()
    vals = [tuple(sorted(sample_family(f, s).values.items())) for s in range(10)]
    assert len(set(vals)) == 10


def test_constraints_exclude_poles():
    omega = fixture("G2.family9").value()
    f = Family.of("family9", "G2", omega)
    assert any(evaluate(c, {p: 1 for p in f.params} | {"w35": 0}) == 0 for c in f.constraints)
    inst = sample_family(f, 0)
    assert inst.values["w35"] != 0


def test_zero_parameter_family_has_one_assignment():
    f = Family.of("Omega01", "G2", fixture("Omega01").value())
    assert sample_family(f, 0).values == {}
    with pytest.raises(SamplingError):
        sample_family(f, 1)


def test_family_rejects_bad_declarations():
    omega = AltForm(6, 2, {(1, 2): var("a"), (3, 4): 1, (5, 6): 1})
    with pytest.raises(FamilyError):
        Family("f", "G2", omega, ())
    with pytest.raises(FamilyError):
        Family("f", "G2", omega, ("a",), (var("a") - var("a") + 0 * var("a"),))


def test_search_budget_is_enforced():
    a = var("a")
    f = Family("f", "G2", AltForm(6, 2, {(1, 2): a}), ("a",), (a - 1,))
    # the sequence starts 1, -1, 2, -2, ...; a = 1 is excluded
    assert sample_family(f, 0).values == {"a": -1}
    assert sample_family(f, 2, budget=4).values == {"a": -2}
    with pytest.raises(SamplingError):
        sample_family(f, 3, budget=4)


# -- fixtures -------------------------------------------------------------------------


@pytest.mark.parametrize("key", fixture_keys())
def test_every_fixture_decodes_with_provenance(key):
    f = fixture(key)
    f.value()
    ref = f.reference
    assert ref["key"] == key and ref["anchor"] and ref["provenance"]


def test_unknown_fixture():
    with pytest.raises(FixtureError):
        fixture("G9.nothing")


# -- report layer -----------------------------------------------------------------------


def test_status_precedence():
    ok, bad, sampled = Check("a", True), Check("b", False), Check("c", True, sampled=3)
    assert Verdict.from_checks("x", "t", [ok]).status is Status.VERIFIED
    assert Verdict.from_checks("x", "t", [ok, sampled]).status is Status.SAMPLED
    assert Verdict.from_checks("x", "t", [sampled, bad]).status is Status.DISCREPANT
    assert Check("c", True, sampled=3).to_dict()["method"] == "sampled (3 points)"
    with pytest.raises(ValueError):
        Verdict.from_checks("x", "t", [])


def test_report_document_sorts_and_splits_discrepancies():
    vs = [Verdict.from_checks("b", "t", [Check("c", False)]), Verdict.from_checks("a", "t", [Check("c", False)]),
          Verdict.skipped("c", "t", "why")]
    doc = report_document("s", vs, config={"seed": 0}, allowlist=["a"])
    assert [i["item"] for i in doc["items"]] == ["a", "b", "c"]
    assert doc["summary"]["known_discrepancies"] == ["a"]
    assert doc["summary"]["unexpected_discrepancies"] == ["b"]
    assert doc["summary"]["counts"]["SKIPPED"] == 1
    md = render_markdown(doc)
    assert "## a: DISCREPANT" in md and "Unexpected discrepancies: b" in md


def test_compare_matrix_itemizes_entries():
    c = compare_matrix("m", ((1, 0), (0, 1)), ((1, 0), (0, 2)))
    assert not c.passed
    assert c.details["differing_entries"] == ["(2,2): computed 1, printed 2"]


def test_rational_function_sqrt():
    x = parse_scalar("w34^2/(36*w15^2*w26^2)")
    r = rational_function_sqrt(x)
    assert r is not None and r * r == x
    assert rational_function_sqrt(parse_scalar("2*w34^2")) is None
    assert rational_function_sqrt(parse_scalar("-w34^2")) is None


def test_family_verification_of_scalar_curvature():
    alg = catalog("G2")
    f = family10()
    v = verify_family_semi_para_kahler(alg, f, fixture("P0").value(), expected_scalar=fixture("G2.S3").value())
    assert v.status is Status.VERIFIED
    wrong = verify_family_semi_para_kahler(alg, f, fixture("P0").value(), expected_scalar=var("w34"))
    assert wrong.status is Status.DISCREPANT


def test_sampled_fallback_is_labelled():
    alg = catalog("G2")
    v = verify_family_semi_para_kahler(alg, family10(), fixture("P0").value(),
                                       expected_scalar=fixture("G2.S3").value(), samples=2, monomial_cap=1)
    assert v.status is Status.SAMPLED
    assert [c.to_dict()["method"] for c in v.checks if c.name == "scalar curvature"] == ["sampled (2 points)"]


# -- theorem reproduction --------------------------------------------------------------


def test_every_item_has_an_anchor(theorem_runs):
    for items in theorem_runs.values():
        for item in items:
            assert anchor_for(item) is not None, item


def test_allowlist_entries_are_real_items(theorem_runs):
    all_items = {i for items in theorem_runs.values() for i in items}
    for item, reason in known_discrepancies().items():
        assert item in all_items and reason


def test_no_unexpected_discrepancies(theorem_runs):
    allow = set(known_discrepancies())
    for items in theorem_runs.values():
        for item, v in items.items():
            if v.status is Status.DISCREPANT:
                assert item in allow, (item, v.failed_checks)


def test_reports_are_deterministic(theorem_runs):
    settings_ = Settings()
    again = reproduce_theorem("3.3", settings_)
    a = report_document("x", theorem_runs["3.3"].values(), config=settings_.as_dict())
    b = report_document("x", again, config=settings_.as_dict())
    assert to_json(a) == to_json(b)


def test_unknown_selector():
    with pytest.raises(ValueError):
        reproduce_theorem("3.9")
    assert set(THEOREMS) == {"3.1", "3.2", "3.3", "3.4"}
