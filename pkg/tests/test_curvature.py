from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liegeom.algebra import CATALOG_NAMES, LieAlgebra, catalog
from liegeom.curvature import (
    BudgetExceeded,
    DegenerateMetricError,
    Metric,
    curvature,
    curvature_tensor,
    einstein_check,
    float_curvature,
    levi_civita,
    ricci,
    symmetric_product_matrix,
)
from liegeom.linalg import det, matmul, scale
from liegeom.scalar import evaluate, substitute
from liegeom.verify import fixture

from conftest import rationals

SIX = ["G1", "G2", "G3", "G4"]


def assert_levi_civita(alg: LieAlgebra, conn) -> None:
    """Torsion-free and metric, checked entrywise from the coefficients."""
    n = alg.dim
    g = conn.metric.matrix
    G = conn.coefficients
    for i in range(n):
        for j in range(n):
            for k in range(n):
                assert G[i][j][k] - G[j][i][k] == alg.table[i][j][k]
                acc = sum((G[i][j][l] * g[l][k] + G[i][k][l] * g[j][l] for l in range(n)), 0)
                assert acc == 0


def assert_curvature_symmetries(alg: LieAlgebra, conn, R) -> None:
    """``R_ijk^l = -R_jik^l``, first Bianchi, and ``R_ijkl`` skew in the last pair."""
    n = alg.dim
    g = conn.metric.matrix
    num = R.num
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    assert num[i][j][k][l] == -num[j][i][k][l]
                    assert num[i][j][k][l] + num[j][k][i][l] + num[k][i][j][l] == 0
    for i in range(n):
        for j in range(n):
            low = [[sum((num[i][j][k][m] * g[m][l] for m in range(n)), 0) for l in range(n)] for k in range(n)]
            for k in range(n):
                for l in range(n):
                    assert low[k][l] == -low[l][k]


def full(alg: LieAlgebra, g: Metric):
    conn = levi_civita(alg, g)
    R = curvature_tensor(alg, conn)
    return conn, R


def sym_metrics(n: int):
    size = n * (n + 1) // 2
    return st.lists(rationals(3, 2), min_size=size, max_size=size).map(lambda cs: _sym(n, cs))


def _sym(n: int, cs):
    m = [[0] * n for _ in range(n)]
    it = iter(cs)
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = next(it)
    return tuple(tuple(r) for r in m)


PAIRS = [
    ("G1", lambda: fixture("G1.g1").value()),
    ("G1", lambda: Metric(matmul(fixture("G1.Omega0").value().matrix(), fixture("P0").value().matrix))),
    ("G2", lambda: Metric(matmul(fixture("Omega01").value().matrix(), fixture("P0").value().matrix))),
    ("G2", lambda: Metric(matmul(fixture("Omega02").value().matrix(), fixture("P0").value().matrix))),
    ("G3", lambda: Metric(matmul(fixture("Omega01").value().matrix(), fixture("P0").value().matrix))),
    ("G4", lambda: Metric(matmul(fixture("G4.Omega_abc").value().substitute({"a": 1, "b": 2, "c": 3}).matrix(),
                                 fixture("P0").value().matrix))),
]


@pytest.mark.parametrize("case", range(len(PAIRS)))
def test_connections_of_bundled_metrics(case):
    name, make = PAIRS[case]
    alg = catalog(name)
    conn, R = full(alg, make())
    assert_levi_civita(alg, conn)
    assert_curvature_symmetries(alg, conn, R)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(CATALOG_NAMES), st.data())
def test_random_metrics_give_levi_civita_connections(name, data):
    alg = catalog(name)
    m = data.draw(sym_metrics(alg.dim))
    if det(m) == 0:
        return
    conn, R = full(alg, Metric(m))
    assert_levi_civita(alg, conn)
    assert_curvature_symmetries(alg, conn, R)
    # the direct contraction agrees with the one read off the full tensor
    a = ricci(alg, Metric(m), connection=conn)
    b = ricci(alg, Metric(m), R, connection=conn)
    assert a.ricci == b.ricci and a.scalar == b.scalar


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SIX), st.data(), rationals(4, 3))
def test_scaling_the_metric(name, data, c):
    if c == 0:
        return
    alg = catalog(name)
    m = data.draw(sym_metrics(6))
    if det(m) == 0:
        return
    base = ricci(alg, Metric(m))
    scaled = ricci(alg, Metric(scale(c, m)))
    assert scaled.connection.coefficients == base.connection.coefficients
    assert scaled.ricci == base.ricci
    assert scaled.scalar == base.scalar / c


def test_einstein_kahler_metric():
    alg = catalog("G1")
    g = fixture("G1.g1").value()
    data = ricci(alg, g)
    assert einstein_check(g, data.ricci) == 2
    assert data.scalar == 12


def _float_case(rng: random.Random):
    name, key, base = rng.choice([
        ("G1", "G1.g2", None),
        ("G2", "G2.g3", None),
        ("G4", "G4.Omega_abc", "P0"),
    ])
    if base is None:
        g = fixture(key).value()
    else:
        g = Metric(matmul(fixture(key).value().matrix(), fixture(base).value().matrix))
    while True:
        vals = {p: Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5)) for p in sorted(g.parameters)}
        if evaluate(g.determinant, vals) != 0:
            return catalog(name), g, vals


def test_float_cross_check_on_random_instantiations():
    rng = random.Random(20240601)
    for _ in range(20):
        alg, g, vals = _float_case(rng)
        exact = ricci(alg, g)
        _, _, ric, S = float_curvature(alg, g, {k: float(v) for k, v in vals.items()})
        want_ric = np.array([[float(evaluate(x, vals)) for x in r] for r in exact.ricci])
        want_S = float(evaluate(exact.scalar, vals))
        assert np.allclose(ric, want_ric, rtol=1e-9, atol=1e-9 * max(1.0, np.abs(want_ric).max()))
        assert abs(S - want_S) <= 1e-9 * max(1.0, abs(want_S))


def test_parametric_metric_substitution_commutes():
    alg = catalog("G1")
    g = fixture("G1.g2").value()
    S = ricci(alg, g).scalar
    for a in (1, 2, Fraction(-1, 2)):
        assert ricci(alg, g.substitute({"a": a})).scalar == substitute(S, {"a": a})


def test_symmetric_product_convention():
    m = symmetric_product_matrix(3, {(1, 2): 4, (3, 3): -1})
    assert m[0][1] == m[1][0] == 2
    assert m[2][2] == -1


def test_degenerate_metric_is_rejected():
    with pytest.raises(DegenerateMetricError):
        levi_civita(catalog("G2"), Metric(tuple(tuple(1 if i == j and i < 5 else 0 for j in range(6)) for i in range(6))))


def test_monomial_cap_is_enforced():
    alg = catalog("G2")
    g = fixture("G2.g3").value()
    with pytest.raises(BudgetExceeded):
        curvature(alg, g, monomial_cap=1)
