"""Levi-Civita connection, curvature, Ricci tensor and scalar curvature of left-invariant metrics.

Conventions:

* ``∇_{e_i} e_j = Σ_k Γ_ij^k e_k`` from
  ``2g(∇_X Y, Z) = g([X,Y],Z) + g([Z,X],Y) + g(X,[Z,Y])``;
* ``R(e_i,e_j)e_k = Σ_l R_ijk^l e_l`` with ``R(X,Y) = [∇_X,∇_Y] - ∇_[X,Y]``;
* ``Ric_jk = Σ_i R_ijk^i``, ``RIC = g^{-1} Ric``, ``S = trace(RIC)``.

Parametric metrics are handled fraction-free.  With ``g = G / c`` (``G``
polynomial), ``Δ = det G`` and ``N = adj(G) · rhs(G)`` we have ``Γ = N / 2Δ``;
Ricci numerators are assembled over the common denominator ``4Δ²`` and a
single exact division happens at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .algebra import LieAlgebra
from .linalg import Matrix, adjugate, as_matrix, det, inverse, is_symmetric, matmul, trace
from .scalar import (
    Poly,
    Scalar,
    divide,
    evaluate,
    free_parameters,
    make_ratio,
    numer_denom,
    size,
    substitute,
)

__all__ = [
    "DEFAULT_MONOMIAL_CAP",
    "BudgetExceeded",
    "Connection",
    "CurvatureData",
    "DegenerateMetricError",
    "Metric",
    "RiemannTensor",
    "curvature",
    "curvature_tensor",
    "einstein_check",
    "float_curvature",
    "levi_civita",
    "ricci",
    "symmetric_product_matrix",
]

DEFAULT_MONOMIAL_CAP = 20000
CONTRACTION = "Ric_jk = sum_i R_ijk^i, R(e_i,e_j)e_k = sum_l R_ijk^l e_l"


class DegenerateMetricError(ValueError):
    """The metric determinant is identically zero."""


class BudgetExceeded(RuntimeError):
    """An intermediate polynomial exceeded the configured monomial cap."""

    def __init__(self, stage: str, monomials: int, cap: int):
        super().__init__(f"{stage}: {monomials} monomials exceeds cap {cap}")
        self.stage = stage
        self.monomials = monomials
        self.cap = cap


@dataclass(frozen=True)
class Metric:
    """Symmetric nondegenerate bilinear form ``g_ij = g(e_i, e_j)``."""

    matrix: Matrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if any(len(r) != len(m) for r in m):
            raise ValueError("metric matrix must be square")
        if not is_symmetric(m):
            raise ValueError("metric matrix is not symmetric")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @cached_property
    def determinant(self) -> Scalar:
        return det(self.matrix)

    @cached_property
    def inverse(self) -> Matrix:
        if self.determinant == 0:
            raise DegenerateMetricError("metric is degenerate")
        return inverse(self.matrix)

    @property
    def parameters(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for r in self.matrix:
            for x in r:
                out |= free_parameters(x)
        return out

    def substitute(self, values: Mapping[str, Scalar]) -> Metric:
        return Metric(tuple(tuple(substitute(x, values) for x in r) for r in self.matrix))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Metric):
            return NotImplemented
        return self.dim == other.dim and all(
            a == b for ra, rb in zip(self.matrix, other.matrix) for a, b in zip(ra, rb)
        )

    __hash__ = None


def symmetric_product_matrix(n: int, terms: Mapping[tuple[int, int], Scalar]) -> Matrix:
    """Matrix of ``Σ c e^i ⊙ e^j`` with ``e^i ⊙ e^j = (e^i⊗e^j + e^j⊗e^i)/2`` (1-based keys)."""
    m: list[list[Scalar]] = [[0] * n for _ in range(n)]
    for (i, j), c in terms.items():
        if i == j:
            m[i - 1][i - 1] = m[i - 1][i - 1] + c
        else:
            half = divide(c, 2)
            m[i - 1][j - 1] = m[i - 1][j - 1] + half
            m[j - 1][i - 1] = m[j - 1][i - 1] + half
    return as_matrix(m)


# -- fraction-free core ---------------------------------------------------------


def _cleared(g: Matrix) -> tuple[Matrix, Scalar]:
    """``(G, c)`` with ``g = G / c`` and ``G`` free of polynomial denominators."""
    dens: list[Poly] = []
    for r in g:
        for x in r:
            _, d = numer_denom(x)
            if isinstance(d, Poly) and not any(d == e for e in dens):
                dens.append(d)
    if not dens:
        return g, 1
    c: Scalar = 1
    for d in dens:
        c = c * d
    out = []
    for r in g:
        row = []
        for x in r:
            num, d = numer_denom(x)
            if d == 1:
                row.append(x * c)
            else:
                q = c.divexact(d)
                assert q is not None
                row.append(num * q)
        out.append(tuple(row))
    return tuple(out), c


def _check(stage: str, values, cap: int | None) -> None:
    if cap is None:
        return
    worst = max((size(x) for x in values), default=0)
    if worst > cap:
        raise BudgetExceeded(stage, worst, cap)


def _flat(t):
    for a in t:
        for b in a:
            yield from b


@dataclass(frozen=True)
class Connection:
    """Levi-Civita coefficients ``Γ_ij^k = num[i][j][k] / den`` (0-based storage)."""

    algebra: LieAlgebra
    metric: Metric
    num: tuple
    den: Scalar
    scale: Scalar = 1  # g = G / scale
    cleared_det: Scalar = 1
    cleared_adj: Matrix = field(default=(), repr=False)

    def gamma(self, i: int, j: int, k: int) -> Scalar:
        """``Γ_ij^k`` with 1-based indices."""
        return self.coefficients[i - 1][j - 1][k - 1]

    @cached_property
    def coefficients(self) -> tuple:
        return tuple(tuple(tuple(make_ratio(x, self.den) for x in b) for b in a) for a in self.num)

    def nonzero(self) -> dict[tuple[int, int, int], Scalar]:
        n = self.algebra.dim
        c = self.coefficients
        return {
            (i + 1, j + 1, k + 1): c[i][j][k]
            for i in range(n)
            for j in range(n)
            for k in range(n)
            if c[i][j][k] != 0
        }


def levi_civita(alg: LieAlgebra, g: Metric, *, monomial_cap: int | None = None) -> Connection:
    """Solve the six-term identity for ``Γ`` exactly."""
    n = alg.dim
    if g.dim != n:
        raise ValueError(f"metric dimension {g.dim} does not match algebra dimension {n}")
    G, c = _cleared(g.matrix)
    delta = det(G)
    if delta == 0:
        raise DegenerateMetricError("metric is degenerate")
    adj = adjugate(G)
    t = alg.table
    # rhs[i][j][l] = Σ_s C_ij^s G_sl + C_li^s G_sj + C_lj^s G_is
    rhs = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for l in range(n):
                acc: Scalar = 0
                for s in range(n):
                    a, b, d = t[i][j][s], t[l][i][s], t[l][j][s]
                    if a != 0 and G[s][l] != 0:
                        acc = acc + a * G[s][l]
                    if b != 0 and G[s][j] != 0:
                        acc = acc + b * G[s][j]
                    if d != 0 and G[i][s] != 0:
                        acc = acc + d * G[i][s]
                rhs[i][j][l] = acc
    num = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            r = rhs[i][j]
            for k in range(n):
                acc = 0
                row = adj[k]
                for l in range(n):
                    if row[l] != 0 and r[l] != 0:
                        acc = acc + row[l] * r[l]
                num[i][j][k] = acc
    frozen = tuple(tuple(tuple(b) for b in a) for a in num)
    _check("connection", _flat(frozen), monomial_cap)
    return Connection(alg, g, frozen, 2 * delta, c, delta, adj)


# -- curvature ---------------------------------------------------------------------


@dataclass(frozen=True)
class RiemannTensor:
    """``R_ijk^l = num[i][j][k][l] / den`` (0-based storage)."""

    num: tuple
    den: Scalar

    def component(self, i: int, j: int, k: int, l: int) -> Scalar:
        return make_ratio(self.num[i - 1][j - 1][k - 1][l - 1], self.den)

    def nonzero(self) -> dict[tuple[int, int, int, int], Scalar]:
        n = len(self.num)
        out = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        x = self.num[i][j][k][l]
                        if x != 0:
                            out[(i + 1, j + 1, k + 1, l + 1)] = make_ratio(x, self.den)
        return out


def curvature_tensor(alg: LieAlgebra, conn: Connection) -> RiemannTensor:
    """``R_ijk^l = Γ_jk^m Γ_im^l - Γ_ik^m Γ_jm^l - C_ij^s Γ_sk^l`` over the denominator ``4Δ²``."""
    n = alg.dim
    N = conn.num
    two_delta = conn.den
    t = alg.table
    out = []
    for i in range(n):
        plane = []
        for j in range(n):
            rows = []
            for k in range(n):
                comp = []
                for l in range(n):
                    acc: Scalar = 0
                    if i != j:
                        for m in range(n):
                            a, b = N[j][k][m], N[i][m][l]
                            if a != 0 and b != 0:
                                acc = acc + a * b
                            a, b = N[i][k][m], N[j][m][l]
                            if a != 0 and b != 0:
                                acc = acc - a * b
                        cs: Scalar = 0
                        for s in range(n):
                            if t[i][j][s] != 0 and N[s][k][l] != 0:
                                cs = cs + t[i][j][s] * N[s][k][l]
                        if cs != 0:
                            acc = acc - two_delta * cs
                    comp.append(acc)
                rows.append(tuple(comp))
            plane.append(tuple(rows))
        out.append(tuple(plane))
    return RiemannTensor(tuple(out), two_delta * two_delta)


@dataclass(frozen=True)
class CurvatureData:
    """Ricci tensor, Ricci operator and scalar curvature, plus optional full ``R``."""

    connection: Connection
    ricci: Matrix
    ricci_operator: Matrix
    scalar: Scalar
    riemann: RiemannTensor | None = None
    contraction: str = CONTRACTION

    @property
    def metric(self) -> Metric:
        return self.connection.metric


def _ricci_numerators(alg: LieAlgebra, conn: Connection, cap: int | None) -> list[list[Scalar]]:
    n = alg.dim
    N = conn.num
    two_delta = conn.den
    t = alg.table
    # T_m = Σ_i N_im^i
    T = []
    for m in range(n):
        acc: Scalar = 0
        for i in range(n):
            acc = acc + N[i][m][i]
        T.append(acc)
    out = [[0] * n for _ in range(n)]
    for j in range(n):
        for k in range(j, n):
            acc = 0
            for m in range(n):
                a = N[j][k][m]
                if a != 0 and T[m] != 0:
                    acc = acc + a * T[m]
            for i in range(n):
                for m in range(n):
                    a, b = N[i][k][m], N[j][m][i]
                    if a != 0 and b != 0:
                        acc = acc - a * b
            cs: Scalar = 0
            for i in range(n):
                for s in range(n):
                    c = t[i][j][s]
                    if c != 0 and N[s][k][i] != 0:
                        cs = cs + c * N[s][k][i]
            if cs != 0:
                acc = acc - two_delta * cs
            out[j][k] = acc
            out[k][j] = acc
    _check("ricci", (x for r in out for x in r), cap)
    return out


def ricci(
    alg: LieAlgebra,
    g: Metric,
    R: RiemannTensor | None = None,
    *,
    connection: Connection | None = None,
    monomial_cap: int | None = None,
) -> CurvatureData:
    """Ricci tensor ``Σ_i R_ijk^i``, Ricci operator ``g^{-1} Ric`` and ``S = trace(RIC)``.

    With ``R`` given the contraction is read off the tensor; otherwise it is
    assembled directly from the connection without building ``R``.
    """
    conn = connection or levi_civita(alg, g, monomial_cap=monomial_cap)
    n = alg.dim
    if R is not None:
        if R.den != conn.den * conn.den:
            raise ValueError("curvature tensor does not belong to this connection")
        num = [[sum((R.num[i][j][k][i] for i in range(n)), 0) for k in range(n)] for j in range(n)]
    else:
        num = _ricci_numerators(alg, conn, monomial_cap)
    den = conn.den * conn.den  # 4Δ²
    ric = as_matrix([[make_ratio(x, den) for x in r] for r in num])
    # g^{-1} = c · adj(G) / Δ, so RIC = c · adj · num / (4Δ³)
    adj, c, delta = conn.cleared_adj, conn.scale, conn.cleared_det
    prod = matmul(adj, as_matrix(num))
    _check("ricci operator", (x for r in prod for x in r), monomial_cap)
    den3 = den * delta
    ric_op = as_matrix([[make_ratio(c * x, den3) for x in r] for r in prod])
    s_num = trace(prod)
    scalar = make_ratio(c * s_num, den3)
    return CurvatureData(conn, ric, ric_op, scalar, R)


def curvature(
    alg: LieAlgebra,
    g: Metric,
    *,
    full: bool = False,
    monomial_cap: int | None = DEFAULT_MONOMIAL_CAP,
) -> CurvatureData:
    """Connection, Ricci data and (with ``full``) the complete curvature tensor."""
    conn = levi_civita(alg, g, monomial_cap=monomial_cap)
    R = curvature_tensor(alg, conn) if full else None
    return ricci(alg, g, R, connection=conn, monomial_cap=monomial_cap)


def einstein_check(g: Metric | Matrix, ric: Matrix) -> Scalar | None:
    """``λ`` with ``Ric = λ g`` exactly, or ``None``.

    The candidate comes from the first nonzero diagonal entry of ``g``
    (the first nonzero entry at all when the diagonal vanishes).
    """
    gm = g.matrix if isinstance(g, Metric) else g
    n = len(gm)
    pos = next(((i, i) for i in range(n) if gm[i][i] != 0), None)
    if pos is None:
        pos = next(((i, j) for i in range(n) for j in range(n) if gm[i][j] != 0), None)
    if pos is None:
        return None
    lam = divide(ric[pos[0]][pos[1]], gm[pos[0]][pos[1]])
    for i in range(n):
        for j in range(n):
            if ric[i][j] != lam * gm[i][j]:
                return None
    return lam


# -- floating-point cross-check ------------------------------------------------------


def float_curvature(alg: LieAlgebra, g, values: Mapping[str, object] | None = None):
    """Independent float64 evaluation of ``(Γ, R, Ric, S)``; parameters bound by ``values``."""
    import numpy as np

    vals = dict(values or {})
    n = alg.dim
    C = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                x = alg.table[i][j][k]
                if x != 0:
                    C[i, j, k] = float(evaluate(x, vals))
    gm = g.matrix if isinstance(g, Metric) else g
    G = np.array([[float(evaluate(x, vals)) for x in r] for r in gm], dtype=float)
    ginv = np.linalg.inv(G)
    rhs = np.einsum("ijs,sl->ijl", C, G) + np.einsum("lis,sj->ijl", C, G) + np.einsum("ljs,is->ijl", C, G)
    gamma = 0.5 * np.einsum("kl,ijl->ijk", ginv, rhs)
    R = (
        np.einsum("jkm,iml->ijkl", gamma, gamma)
        - np.einsum("ikm,jml->ijkl", gamma, gamma)
        - np.einsum("ijs,skl->ijkl", C, gamma)
    )
    ric = np.einsum("ijki->jk", R)
    S = float(np.trace(ginv @ ric))
    return gamma, R, ric, S

