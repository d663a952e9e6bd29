"""Exact dense linear algebra over scalars.

Matrices are tuples of row tuples.  Determinants use a division-free
subset expansion so they work unchanged over polynomial entries; row
reduction divides and is meant for rational (or rational-function) entries.
"""

from __future__ import annotations

from typing import Sequence

from .scalar import Scalar, divide

Matrix = tuple[tuple[Scalar, ...], ...]


def as_matrix(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def zeros(n: int, m: int | None = None) -> Matrix:
    return tuple((0,) * (n if m is None else m) for _ in range(n))


def identity(n: int, c: Scalar = 1) -> Matrix:
    return tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n))


def diag(values: Sequence[Scalar]) -> Matrix:
    n = len(values)
    return tuple(tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            s: Scalar = 0
            for x, y in zip(row, col):
                if x != 0 and y != 0:
                    s = s + x * y
            out_row.append(s)
        out.append(tuple(out_row))
    return tuple(out)


def matvec(a: Matrix, v: Sequence[Scalar]) -> tuple[Scalar, ...]:
    out = []
    for row in a:
        s: Scalar = 0
        for x, y in zip(row, v):
            if x != 0 and y != 0:
                s = s + x * y
        out.append(s)
    return tuple(out)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(c: Scalar, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for r in a for x in r)


def equal(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def trace(a: Matrix) -> Scalar:
    s: Scalar = 0
    for i in range(len(a)):
        s = s + a[i][i]
    return s


def det(a: Matrix) -> Scalar:
    """Determinant by expansion over column subsets, row by row.

    ``minors[S]`` holds the determinant of the leading ``|S|`` rows restricted
    to the columns in bitmask ``S``; no division is performed.
    """
    n = len(a)
    if n == 0:
        return 1
    minors: dict[int, Scalar] = {0: 1}
    for r in range(n):
        nxt: dict[int, Scalar] = {}
        row = a[r]
        for mask, m in minors.items():
            if m == 0:
                continue
            for c in range(n):
                bit = 1 << c
                if mask & bit or row[c] == 0:
                    continue
                # sign = (-1)^(number of used columns to the right of c)
                above = bin(mask >> (c + 1)).count("1")
                term = m * row[c]
                if above & 1:
                    term = -term
                key = mask | bit
                nxt[key] = nxt.get(key, 0) + term
        minors = nxt
    return minors.get((1 << n) - 1, 0)


def minor(a: Matrix, i: int, j: int) -> Matrix:
    return tuple(tuple(x for c, x in enumerate(row) if c != j) for r, row in enumerate(a) if r != i)


def adjugate(a: Matrix) -> Matrix:
    """Classical adjoint, ``adj(a) @ a == det(a) * I``; division-free."""
    n = len(a)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            d = det(minor(a, i, j))
            cof[j][i] = -d if (i + j) & 1 else d
    return as_matrix(cof)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (exact; needs division)."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((k for k in range(r, rows) if m[k][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [divide(x, piv) for x in m[r]]
        for k in range(rows):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    return as_matrix(m), pivots


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> list[tuple[Scalar, ...]]:
    """Basis of ``{x : a x = 0}``, one vector per free column."""
    cols = len(a[0]) if a else (ncols or 0)
    if not a:
        return [tuple(1 if i == j else 0 for i in range(cols)) for j in range(cols)]
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v: list[Scalar] = [0] * cols
        v[f] = 1
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def inverse(a: Matrix) -> Matrix:
    """Exact inverse; raises ZeroDivisionError for singular input."""
    d = det(a)
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(divide(x, d) for x in row) for row in adjugate(a))
