from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from liegeom.linalg import det, identity, inverse, matmul, matvec, nullspace, rank, rref

from conftest import rationals


def matrices(n: int, m: int | None = None):
    m = n if m is None else m
    return st.lists(st.lists(rationals(4, 3), min_size=m, max_size=m), min_size=n, max_size=n).map(
        lambda rows: tuple(tuple(r) for r in rows)
    )


def sym(a):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in a])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(matrices))
def test_det_matches_sympy(a):
    d = Fraction(det(a))
    assert sympy.Rational(d.numerator, d.denominator) == sym(a).det()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(matrices))
def test_inverse_is_two_sided(a):
    if det(a) == 0:
        return
    n = len(a)
    b = inverse(a)
    assert matmul(a, b) == identity(n)
    assert matmul(b, a) == identity(n)


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.integers(1, 5), st.integers(1, 6)).flatmap(lambda nm: matrices(*nm)))
def test_nullspace_rank_nullity(a):
    ncols = len(a[0])
    kernel = nullspace(a, ncols)
    assert rank(a) + len(kernel) == ncols
    for v in kernel:
        assert all(x == 0 for x in matvec(a, v))
    assert rank(a) == sym(a).rank()


def test_rref_pivots():
    r, piv = rref(((2, 4, 0), (1, 2, 1)))
    assert piv == [0, 2]
    assert r[0] == (1, 2, 0)
