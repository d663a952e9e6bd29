from __future__ import annotations

import json
from itertools import combinations

import pytest

from liegeom.algebra import (
    CATALOG_NAMES,
    AlgebraFormatError,
    LieAlgebra,
    adjoint,
    catalog,
    direct_sum,
    dump_algebra,
    load_algebra,
    validate_jacobi,
)
from liegeom.linalg import matmul, sub


def basis(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if k == i else 0 for k in range(n))


def jacobi_by_brackets(alg: LieAlgebra) -> bool:
    """Oracle: expand ``[[x,y],z] + [[y,z],x] + [[z,x],y]`` on basis vectors via ``bracket``."""
    n = alg.dim
    for i, j, k in combinations(range(n), 3):
        x, y, z = basis(n, i), basis(n, j), basis(n, k)
        terms = [alg.bracket(alg.bracket(x, y), z), alg.bracket(alg.bracket(y, z), x), alg.bracket(alg.bracket(z, x), y)]
        if any(sum(t[m] for t in terms) != 0 for m in range(n)):
            return False
    return True


def corrupted_g1() -> LieAlgebra:
    g1 = catalog("G1")
    consts = dict(g1.constants)
    del consts[(2, 4, 2)]
    consts[(2, 4, 3)] = 1
    return LieAlgebra(6, consts, name="G1-corrupted")


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_satisfies_jacobi(name):
    alg = catalog(name)
    assert validate_jacobi(alg).passed
    assert jacobi_by_brackets(alg)


def test_corrupted_table_fails_on_some_triple():
    alg = corrupted_g1()
    rep = validate_jacobi(alg)
    assert not rep.passed
    assert not jacobi_by_brackets(alg)
    f = rep.failures[0]
    assert f.i < f.j < f.k and f.residual != 0


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_adjoint_is_a_representation(name):
    alg = catalog(name)
    n = alg.dim
    for i, j in combinations(range(1, n + 1), 2):
        lhs = sub(matmul(adjoint(alg, i), adjoint(alg, j)), matmul(adjoint(alg, j), adjoint(alg, i)))
        b = alg.bracket(basis(n, i - 1), basis(n, j - 1))
        rhs = [[0] * n for _ in range(n)]
        for k, c in enumerate(b):
            if c != 0:
                a = adjoint(alg, k + 1)
                rhs = [[rhs[r][s] + c * a[r][s] for s in range(n)] for r in range(n)]
        assert [list(r) for r in lhs] == rhs


def test_bracket_is_antisymmetric():
    alg = catalog("G3")
    for i in range(6):
        for j in range(6):
            x, y = basis(6, i), basis(6, j)
            assert alg.bracket(x, y) == tuple(-c for c in alg.bracket(y, x))


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_file_round_trip(name):
    alg = catalog(name)
    again = load_algebra(json.dumps(dump_algebra(alg)))
    assert again.constants == alg.constants


def test_direct_sum_blocks():
    a = direct_sum(catalog("sl2"), catalog("so3"))
    assert a.dim == 6
    assert validate_jacobi(a).passed
    assert a.bracket(basis(6, 0), basis(6, 3)) == (0,) * 6


@pytest.mark.parametrize(
    "doc, fragment",
    [
        ('{"dim": 3, "brackets": [{"i": 2, "j": 1, "k": 3, "c": "1"}]}', "brackets[0]"),
        ('{"dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}, {"i": 1, "j": 2, "k": 3, "c": "2"}]}', "duplicate"),
        ('{"dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": "t"}]}', "brackets[0].c"),
        ('{"dim": 0}', "dim"),
        ('{"dim": 3,\n "brackets": [}', "line 2"),
    ],
)
def test_parse_errors_name_the_field(doc, fragment):
    with pytest.raises(AlgebraFormatError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        load_algebra(doc)


def test_parametric_constants():
    alg = load_algebra('{"dim": 2, "params": ["t"], "brackets": [{"i": 1, "j": 2, "k": 2, "c": "t"}]}')
    assert alg.parameters == {"t"}
    assert not alg.is_rational
