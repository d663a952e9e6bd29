from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liegeom.algebra import catalog
from liegeom.forms import AltForm
from liegeom.linalg import det, identity, inverse, is_zero, matmul
from liegeom.structures import (
    Endomorphism,
    EndomorphismFormatError,
    IncompatiblePairError,
    StructureKind,
    associated_metric,
    check_square,
    compatibility_residual,
    dump_endomorphism,
    eigenspace_split,
    integrability_residual,
    is_bi_invariant,
    linear_compatibility_residual,
    load_endomorphism,
    nijenhuis,
    verify_kahler_triple,
)
from liegeom.verify import fixture

from conftest import rationals

SIX = ["G1", "G2", "G3", "G4"]
KINDS = list(StructureKind)


def square(n: int):
    return st.lists(st.lists(rationals(3, 2), min_size=n, max_size=n), min_size=n, max_size=n).map(
        lambda rows: tuple(tuple(r) for r in rows)
    )


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SIX), square(6), st.sampled_from(KINDS))
def test_tensor_and_index_forms_agree(name, m, kind):
    alg = catalog(name)
    J = Endomorphism(m)
    assert nijenhuis(alg, J, kind) == integrability_residual(alg, J, kind)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SIX), square(6))
def test_para_integrable_iff_eigenspaces_are_subalgebras(name, a):
    if det(a) == 0:
        return
    alg = catalog(name)
    P = Endomorphism(matmul(a, matmul(fixture("P0").value().matrix, inverse(a))))
    assert check_square(P, StructureKind.PARACOMPLEX)
    split = eigenspace_split(alg, P)
    assert split.dims == (3, 3)
    integrable = nijenhuis(alg, P, StructureKind.PARACOMPLEX).is_zero
    assert integrable == (split.plus_subalgebra and split.minus_subalgebra)


@pytest.mark.parametrize("name", SIX)
def test_P0_is_integrable(name):
    alg = catalog(name)
    P0 = fixture("P0").value()
    assert nijenhuis(alg, P0, StructureKind.PARACOMPLEX).is_zero
    assert eigenspace_split(alg, P0).plus_subalgebra


def test_kahler_triple_G1():
    alg = catalog("G1")
    rep = verify_kahler_triple(alg, fixture("G1.omega1").value(), fixture("G1.J1").value())
    assert rep.passed and rep.label == "Kähler"
    assert rep.metric == fixture("G1.g1").value()


def test_linear_and_quadratic_compatibility_agree_for_complex_structures():
    omega, J = fixture("G1.omega1").value(), fixture("G1.J1").value()
    assert is_zero(linear_compatibility_residual(omega, J))
    assert is_zero(compatibility_residual(omega, J, StructureKind.COMPLEX))
    bad = Endomorphism(matmul(J.matrix, identity(6, -1)))
    assert check_square(bad, StructureKind.COMPLEX)
    assert is_zero(compatibility_residual(omega, bad, StructureKind.COMPLEX))
    # -J is still compatible, but the metric flips sign
    assert associated_metric(omega, bad).matrix == tuple(tuple(-x for x in r) for r in fixture("G1.g1").value().matrix)


def test_incompatible_pair_raises():
    omega = AltForm(6, 2, {(1, 2): 1, (3, 4): 1, (5, 6): 1})
    # J e1 = e3, J e2 = -e4: squares to -Id but ω(Je1, Je2) = -ω(e1, e2)
    J = Endomorphism.from_images([(0, 0, 1, 0, 0, 0), (0, 0, 0, -1, 0, 0), (-1, 0, 0, 0, 0, 0),
                                  (0, 1, 0, 0, 0, 0), (0, 0, 0, 0, 0, 1), (0, 0, 0, 0, -1, 0)])
    assert check_square(J, StructureKind.COMPLEX)
    assert not is_zero(linear_compatibility_residual(omega, J))
    with pytest.raises(IncompatiblePairError):
        associated_metric(omega, J)


def test_square_check_rejects_unbalanced_involution():
    P = Endomorphism(tuple(tuple((1 if i < 4 else -1) if i == j else 0 for j in range(6)) for i in range(6)))
    assert not check_square(P, StructureKind.PARACOMPLEX)


def test_identity_is_bi_invariant():
    assert is_bi_invariant(catalog("G2"), Endomorphism.identity(6))
    assert not is_bi_invariant(catalog("G2"), fixture("P0").value())


def test_endomorphism_file_round_trip():
    J = fixture("G1.J2").value()
    again = load_endomorphism(json.dumps(dump_endomorphism(J)), 6)
    assert again == J


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ('{"dim": 2, "rows": [["1", "0"]]}', "rows"),
        ('{"dim": 2, "rows": [["1", "0"], ["0", "b"]]}', "rows[1][1]"),
        ('{"dim": 3, "rows": [["1","0","0"],["0","1","0"],["0","0","1"]]}', "dimension"),
    ],
)
def test_endomorphism_parse_errors(doc, fragment):
    with pytest.raises(EndomorphismFormatError) as exc:
        load_endomorphism(doc, 2)
    assert fragment in str(exc.value)
