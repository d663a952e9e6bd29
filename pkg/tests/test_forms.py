from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from liegeom.algebra import CATALOG_NAMES, LieAlgebra, catalog, direct_sum
from liegeom.forms import (
    AltForm,
    FormFormatError,
    ce_differential,
    closed_2form_space,
    det_2form,
    dump_form,
    form_from_matrix,
    interior,
    is_semi_kahler_form,
    load_form,
    pfaffian,
    symplectic_exists,
    unit,
    volume_form,
    wedge,
)
from liegeom.linalg import det

from conftest import forms, rationals

SIX = [n for n in CATALOG_NAMES if catalog(n).dim == 6]


def _sign_sorted(idx):
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign, tuple(sorted(idx))


def value_on(form: AltForm, idx) -> Fraction:
    s, key = _sign_sorted(idx)
    return s * form.coeffs.get(key, 0) if s else 0


def d_oracle(alg: LieAlgebra, alpha: AltForm) -> AltForm:
    """``dα(x_0..x_p) = Σ_{i<j} (-1)^{i+j} α([x_i,x_j], x_0..x̂_i..x̂_j..x_p)`` on basis vectors."""
    n, p = alg.dim, alpha.degree
    out = {}
    for idx in combinations(range(1, n + 1), p + 1):
        acc = 0
        for a, b in combinations(range(p + 1), 2):
            rest = [idx[m] for m in range(p + 1) if m not in (a, b)]
            for k in range(1, n + 1):
                c = alg.c(idx[a], idx[b], k)
                if c != 0:
                    acc += (-1) ** (a + b) * c * value_on(alpha, [k, *rest])
        if acc != 0:
            out[idx] = acc
    return AltForm(n, p + 1, out)


@pytest.mark.parametrize("name", SIX)
@pytest.mark.parametrize("degree", [1, 2, 3])
def test_differential_matches_invariant_formula(name, degree):
    alg = catalog(name)
    for idx in combinations(range(1, 7), degree):
        e = AltForm(6, degree, {idx: 1})
        assert ce_differential(alg, e) == d_oracle(alg, e)


def test_differential_of_one_form_convention():
    alg = catalog("G1")
    d = ce_differential(alg, AltForm(6, 1, {(2,): 1}))
    assert d == AltForm(6, 2, {(1, 2): -1, (2, 4): -1, (3, 6): -1})


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SIX), forms(6, 2), forms(6, 2), rationals(), rationals())
def test_differential_is_linear(name, a, b, s, t):
    alg = catalog(name)
    lhs = ce_differential(alg, a * s + b * t)
    assert lhs == ce_differential(alg, a) * s + ce_differential(alg, b) * t


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SIX), st.integers(1, 3).flatmap(lambda p: forms(6, p)))
def test_d_squared_is_zero(name, alpha):
    alg = catalog(name)
    assert ce_differential(alg, ce_differential(alg, alpha)).is_zero


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SIX), forms(6, 1), forms(6, 2))
def test_leibniz_rule(name, a, b):
    alg = catalog(name)
    lhs = ce_differential(alg, wedge(a, b))
    rhs = wedge(ce_differential(alg, a), b) - wedge(a, ce_differential(alg, b))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda p: forms(6, p)), st.integers(1, 3).flatmap(lambda q: forms(6, q)))
def test_wedge_graded_commutative(a, b):
    sign = (-1) ** (a.degree * b.degree)
    assert wedge(a, b) == wedge(b, a) * sign


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals(), min_size=6, max_size=6), forms(6, 2), forms(6, 1))
def test_interior_is_antiderivation(x, a, b):
    lhs = interior(x, wedge(a, b))
    rhs = wedge(interior(x, a), b) + wedge(a, interior(x, b))
    assert lhs == rhs


def test_interior_contracts_first_slot():
    assert interior(unit(6, 2), AltForm(6, 2, {(1, 2): 1})) == AltForm(6, 1, {(1,): -1})
    assert interior(unit(6, 1), AltForm(6, 2, {(1, 2): 1})) == AltForm(6, 1, {(2,): 1})


@settings(max_examples=200, deadline=None)
@given(forms(6, 2, bound=6))
def test_det_equals_pfaffian_squared(omega):
    m = omega.matrix()
    pf = pfaffian(m)
    assert det_2form(omega) == pf * pf
    sm = sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in m])
    assert sympy.Rational(Fraction(pf * pf).numerator, Fraction(pf * pf).denominator) == sm.det()


@settings(max_examples=50, deadline=None)
@given(forms(6, 2))
def test_top_power_is_pfaffian_volume(omega):
    # ω^3 = 6 Pf(ω) e^1..6
    cube = wedge(wedge(omega, omega), omega)
    assert cube == volume_form(6, 6 * pfaffian(omega.matrix()))


@settings(max_examples=50, deadline=None)
@given(forms(6, 2))
def test_matrix_round_trip(omega):
    assert form_from_matrix(omega.matrix()) == omega
    assert det(omega.matrix()) == det_2form(omega)


@pytest.mark.parametrize("name", SIX)
def test_closed_space_dimension_is_nullity(name):
    alg = catalog(name)
    pairs = list(combinations(range(1, 7), 2))
    triples = list(combinations(range(1, 7), 3))
    cols = [d_oracle(alg, AltForm(6, 2, {p: 1})) for p in pairs]
    m = sympy.Matrix([[sympy.Rational(Fraction(c.coeffs.get(t, 0)).numerator, Fraction(c.coeffs.get(t, 0)).denominator)
                       for c in cols] for t in triples])
    space = closed_2form_space(alg)
    assert space.dimension == len(pairs) - m.rank()
    if name == "G1":
        assert space.dimension == 5
    for b in space.basis:
        assert ce_differential(alg, b).is_zero
    assert ce_differential(alg, space.generic_w()).is_zero


@pytest.mark.parametrize("name, exists", [("G1", True), ("G2", False), ("G3", False), ("G4", False)])
def test_symplectic_verdicts(name, exists):
    v = symplectic_exists(catalog(name))
    assert v.exists is exists
    if exists:
        assert ce_differential(catalog(name), v.witness).is_zero
        assert det_2form(v.witness) != 0
    else:
        assert v.determinant == 0


def test_symplectic_on_abelian_sum():
    alg = direct_sum(catalog("A3.1"), catalog("A3.1"))
    v = symplectic_exists(alg)
    assert v.exists and det_2form(v.witness) != 0


def test_semi_kahler_on_abelian_is_automatic():
    alg = direct_sum(catalog("A3.1"), catalog("A3.1"))
    omega = AltForm(6, 2, {(1, 2): 1, (3, 4): 1, (5, 6): 1})
    assert is_semi_kahler_form(alg, omega).holds


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 4).flatmap(lambda p: forms(6, p)))
def test_form_file_round_trip(alpha):
    assert load_form(json.dumps(dump_form(alpha))) == alpha


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ('{"degree": 2, "terms": [{"indices": [2, 1], "c": "1"}]}', "terms[0].indices"),
        ('{"degree": 2, "terms": [{"indices": [1, 2], "c": "1"}, {"indices": [1, 2], "c": "1"}]}', "duplicate"),
        ('{"degree": 2, "terms": [{"indices": [1, 7], "c": "1"}]}', "1..6"),
        ('{"degree": 2, "terms": [{"indices": [1, 2], "c": "q"}]}', "terms[0].c"),
        ('{"terms": []}', "degree"),
    ],
)
def test_form_parse_errors(doc, fragment):
    with pytest.raises(FormFormatError) as exc:
        load_form(doc, 6)
    assert fragment in str(exc.value)
