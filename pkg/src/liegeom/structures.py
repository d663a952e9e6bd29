"""Almost complex and almost paracomplex structures on Lie algebras.

An endomorphism is stored as a matrix whose column ``i`` holds the image of
``e_i``: ``J(e_i) = Σ_k J[k][i] e_k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .algebra import LieAlgebra, adjoint
from .curvature import Metric
from .forms import AltForm, ce_differential, det_2form
from .linalg import Matrix, add, as_matrix, identity, is_zero, matmul, matvec, nullspace, rank, scale, sub, transpose
from .scalar import Scalar, ScalarParseError, free_parameters, parse_scalar, scalar_str, substitute

__all__ = [
    "EigenSplit",
    "Endomorphism",
    "EndomorphismFormatError",
    "IncompatiblePairError",
    "KahlerReport",
    "NijenhuisTensor",
    "StructureKind",
    "associated_metric",
    "check_square",
    "compatibility_residual",
    "linear_compatibility_residual",
    "square_residual",
    "dump_endomorphism",
    "eigenspace_split",
    "integrability_residual",
    "is_bi_invariant",
    "is_compatible",
    "load_endomorphism",
    "nijenhuis",
    "nijenhuis_complex",
    "nijenhuis_para",
    "parse_endomorphism",
    "verify_kahler_triple",
]


class StructureKind(str, Enum):
    COMPLEX = "complex"
    PARACOMPLEX = "paracomplex"

    @property
    def square_sign(self) -> int:
        """``J² = sign · Id``."""
        return -1 if self is StructureKind.COMPLEX else 1

    @property
    def compat_sign(self) -> int:
        """``ω(JX, JY) = sign · ω(X, Y)``."""
        return 1 if self is StructureKind.COMPLEX else -1


class IncompatiblePairError(ValueError):
    """``ω(·, J·)`` is not symmetric."""


class EndomorphismFormatError(ValueError):
    """Malformed endomorphism document."""


@dataclass(frozen=True)
class Endomorphism:
    """Linear operator on the algebra; ``matrix[k][i]`` is the ``e_k`` coefficient of ``J(e_i)``."""

    matrix: Matrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if any(len(r) != len(m) for r in m):
            raise ValueError("endomorphism matrix must be square")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_images(cls, images: Sequence[Sequence[Scalar]]) -> Endomorphism:
        """Build from the image coefficient vectors of ``e_1 .. e_n``."""
        return cls(transpose(as_matrix(images)))

    @classmethod
    def identity(cls, n: int) -> Endomorphism:
        return cls(identity(n))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def image(self, i: int) -> tuple[Scalar, ...]:
        """Coefficients of ``J(e_i)`` (1-based ``i``)."""
        return tuple(r[i - 1] for r in self.matrix)

    def __call__(self, x: Sequence[Scalar]) -> tuple[Scalar, ...]:
        return matvec(self.matrix, x)

    def __matmul__(self, other: Endomorphism) -> Endomorphism:
        return Endomorphism(matmul(self.matrix, other.matrix))

    def __neg__(self) -> Endomorphism:
        return Endomorphism(scale(-1, self.matrix))

    def __mul__(self, c: Scalar) -> Endomorphism:
        return Endomorphism(scale(c, self.matrix))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self.dim == other.dim and is_zero(sub(self.matrix, other.matrix))

    __hash__ = None

    @property
    def parameters(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for r in self.matrix:
            for x in r:
                out |= free_parameters(x)
        return out

    def substitute(self, values: Mapping[str, Scalar]) -> Endomorphism:
        return Endomorphism(tuple(tuple(substitute(x, values) for x in r) for r in self.matrix))

    def rows_str(self) -> list[list[str]]:
        return [[scalar_str(x) for x in r] for r in self.matrix]


# -- Nijenhuis tensors --------------------------------------------------------------


@dataclass(frozen=True)
class NijenhuisTensor:
    """Components ``N(e_i, e_j) = Σ_k N_ij^k e_k`` for ``i < j`` (1-based keys, nonzero only)."""

    dim: int
    components: Mapping[tuple[int, int, int], Scalar]

    @property
    def is_zero(self) -> bool:
        return not self.components

    def component(self, i: int, j: int, k: int) -> Scalar:
        if i == j:
            return 0
        if i < j:
            return self.components.get((i, j, k), 0)
        return -self.components.get((j, i, k), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NijenhuisTensor):
            return NotImplemented
        keys = set(self.components) | set(other.components)
        return self.dim == other.dim and all(self.components.get(k, 0) == other.components.get(k, 0) for k in keys)

    __hash__ = None


def nijenhuis(alg: LieAlgebra, J: Endomorphism, kind: StructureKind) -> NijenhuisTensor:
    """``N(X,Y) = [JX,JY] ∓ [X,Y] - J[JX,Y] - J[X,JY]`` (minus for complex, plus for para)."""
    n = alg.dim
    if J.dim != n:
        raise ValueError(f"operator dimension {J.dim} does not match algebra dimension {n}")
    sign = -1 if kind is StructureKind.COMPLEX else 1
    images = [J.image(i) for i in range(1, n + 1)]
    units = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            jx, jy = images[i], images[j]
            a = alg.bracket(jx, jy)
            b = alg.table[i][j]
            c = J(alg.bracket(jx, units[j]))
            d = J(alg.bracket(units[i], jy))
            for k in range(n):
                v = a[k] + sign * b[k] - c[k] - d[k]
                if v != 0:
                    out[(i + 1, j + 1, k + 1)] = v
    return NijenhuisTensor(n, out)


def nijenhuis_complex(alg: LieAlgebra, J: Endomorphism) -> NijenhuisTensor:
    return nijenhuis(alg, J, StructureKind.COMPLEX)


def nijenhuis_para(alg: LieAlgebra, P: Endomorphism) -> NijenhuisTensor:
    return nijenhuis(alg, P, StructureKind.PARACOMPLEX)


def integrability_residual(alg: LieAlgebra, J: Endomorphism, kind: StructureKind = StructureKind.COMPLEX) -> NijenhuisTensor:
    """Index form ``J_i^l J_j^m C_lm^k - J_i^l J_m^k C_lj^m - J_j^l J_m^k C_il^m ∓ C_ij^k``.

    ``J_i^k`` is the ``e_k`` coefficient of ``J(e_i)``.  Computed by explicit
    index sums, independently of :func:`nijenhuis`.
    """
    n = alg.dim
    M = J.matrix
    t = alg.table
    sign = -1 if kind is StructureKind.COMPLEX else 1
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                v: Scalar = sign * t[i][j][k]
                for l in range(n):
                    Jil, Jjl = M[l][i], M[l][j]
                    for m in range(n):
                        if Jil != 0:
                            if M[m][j] != 0 and t[l][m][k] != 0:
                                v = v + Jil * M[m][j] * t[l][m][k]
                            if M[k][m] != 0 and t[l][j][m] != 0:
                                v = v - Jil * M[k][m] * t[l][j][m]
                        if Jjl != 0 and M[k][m] != 0 and t[i][l][m] != 0:
                            v = v - Jjl * M[k][m] * t[i][l][m]
                if v != 0:
                    out[(i + 1, j + 1, k + 1)] = v
    return NijenhuisTensor(n, out)


# -- algebraic conditions --------------------------------------------------------------


def _eigen_dims(P: Endomorphism) -> tuple[int, int]:
    n = P.dim
    plus = n - rank(sub(P.matrix, identity(n)))
    minus = n - rank(add(P.matrix, identity(n)))
    return plus, minus


def check_square(J: Endomorphism, kind: StructureKind) -> bool:
    """``J² = -Id`` (complex) or ``P² = Id`` with equal-dimension eigenspaces (para)."""
    n = J.dim
    sq = matmul(J.matrix, J.matrix)
    if not is_zero(sub(sq, identity(n, kind.square_sign))):
        return False
    if kind is StructureKind.PARACOMPLEX:
        if n % 2:
            return False
        return _eigen_dims(J) == (n // 2, n // 2)
    return True


def compatibility_residual(omega: AltForm, J: Endomorphism, kind: StructureKind) -> Matrix:
    """``Jᵀ ω J ∓ ω``; zero iff ``ω(JX, JY) = ±ω(X, Y)``."""
    W = omega.matrix()
    if len(W) != J.dim:
        raise ValueError("form and operator dimensions differ")
    lhs = matmul(transpose(J.matrix), matmul(W, J.matrix))
    return sub(lhs, scale(kind.compat_sign, W))


def is_compatible(omega: AltForm, J: Endomorphism, kind: StructureKind) -> bool:
    return is_zero(compatibility_residual(omega, J, kind))


def linear_compatibility_residual(omega: AltForm, J: Endomorphism) -> Matrix:
    """First family of the Kähler system: ``ω_kj J_i^k + ω_ik J_j^k`` for all ``i, j``."""
    W = omega.matrix()
    M = J.matrix
    n = len(W)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v: Scalar = 0
            for k in range(n):
                if W[k][j] != 0 and M[k][i] != 0:
                    v = v + W[k][j] * M[k][i]
                if W[i][k] != 0 and M[k][j] != 0:
                    v = v + W[i][k] * M[k][j]
            row.append(v)
        out.append(tuple(row))
    return tuple(out)


def square_residual(J: Endomorphism, kind: StructureKind) -> Matrix:
    """Second family: ``J_k^i J_j^k ∓ δ_j^i`` (``-δ`` target for complex)."""
    n = J.dim
    return sub(matmul(J.matrix, J.matrix), identity(n, kind.square_sign))


def associated_metric(omega: AltForm, J: Endomorphism) -> Metric:
    """``g(X, Y) = ω(X, JY)``, i.e. ``g = W · J``; raises unless exactly symmetric."""
    W = omega.matrix()
    if len(W) != J.dim:
        raise ValueError("form and operator dimensions differ")
    g = matmul(W, J.matrix)
    try:
        return Metric(g)
    except ValueError:
        raise IncompatiblePairError("incompatible pair: ω(·, J·) is not symmetric") from None


def is_bi_invariant(alg: LieAlgebra, J: Endomorphism) -> bool:
    """``ad_{e_i} ∘ J = J ∘ ad_{e_i}`` for every basis index."""
    for i in range(1, alg.dim + 1):
        ad = adjoint(alg, i)
        if not is_zero(sub(matmul(ad, J.matrix), matmul(J.matrix, ad))):
            return False
    return True


@dataclass(frozen=True)
class EigenSplit:
    plus: tuple[tuple[Scalar, ...], ...]
    minus: tuple[tuple[Scalar, ...], ...]
    plus_subalgebra: bool
    minus_subalgebra: bool

    @property
    def dims(self) -> tuple[int, int]:
        return len(self.plus), len(self.minus)


def _closed_under_bracket(alg: LieAlgebra, basis: Sequence[Sequence[Scalar]]) -> bool:
    if not basis:
        return True
    r = rank(as_matrix(basis))
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            v = alg.bracket(basis[a], basis[b])
            if any(x != 0 for x in v) and rank(as_matrix(list(basis) + [v])) != r:
                return False
    return True


def eigenspace_split(alg: LieAlgebra, P: Endomorphism) -> EigenSplit:
    """Exact ``±1`` eigenbases of an involution and whether each is a subalgebra."""
    n = P.dim
    if not is_zero(sub(matmul(P.matrix, P.matrix), identity(n))):
        raise ValueError("eigenspace_split needs P² = Id")
    plus = tuple(nullspace(sub(P.matrix, identity(n)), n))
    minus = tuple(nullspace(add(P.matrix, identity(n)), n))
    return EigenSplit(plus, minus, _closed_under_bracket(alg, plus), _closed_under_bracket(alg, minus))


# -- the Kähler system ---------------------------------------------------------------


@dataclass(frozen=True)
class KahlerReport:
    """Per-condition outcome for a triple ``(ω, J, g = ω(·, J·))``."""

    kind: StructureKind
    compatible: bool
    squares: bool
    integrable: bool
    closed: bool
    nondegenerate: bool
    metric: Metric | None
    compatibility: Matrix = field(repr=False)
    square: Matrix = field(repr=False)
    integrability: NijenhuisTensor = field(repr=False)
    differential: AltForm = field(repr=False)
    determinant: Scalar = 0

    @property
    def passed(self) -> bool:
        return self.compatible and self.squares and self.integrable and self.closed and self.nondegenerate

    @property
    def label(self) -> str:
        if not self.passed:
            return "not Kähler" if self.kind is StructureKind.COMPLEX else "not para-Kähler"
        return "Kähler" if self.kind is StructureKind.COMPLEX else "para-Kähler"


def verify_kahler_triple(
    alg: LieAlgebra, omega: AltForm, J: Endomorphism, kind: StructureKind = StructureKind.COMPLEX
) -> KahlerReport:
    """Evaluate the three equation families of the Kähler system plus ``dω = 0`` and ``det ω ≠ 0``."""
    lin = linear_compatibility_residual(omega, J)
    sq = square_residual(J, kind)
    integ = integrability_residual(alg, J, kind)
    d = ce_differential(alg, omega)
    dt = det_2form(omega)
    compatible = is_zero(lin)
    metric = None
    if compatible:
        try:
            metric = associated_metric(omega, J)
        except IncompatiblePairError:
            metric = None
    return KahlerReport(
        kind=kind,
        compatible=compatible,
        squares=is_zero(sq),
        integrable=integ.is_zero,
        closed=d.is_zero,
        nondegenerate=dt != 0,
        metric=metric,
        compatibility=lin,
        square=sq,
        integrability=integ,
        differential=d,
        determinant=dt,
    )


# -- file format ------------------------------------------------------------------


def parse_endomorphism(doc: Mapping, dim: int | None = None, *, key: str = "rows") -> Matrix:
    """Parse ``{"dim": n, "params": [...], "rows": [[...], ...]}`` into a matrix of scalars."""
    if not isinstance(doc, Mapping):
        raise EndomorphismFormatError("document must be an object")
    n = doc.get("dim", dim)
    if not isinstance(n, int) or n < 1:
        raise EndomorphismFormatError("field 'dim': expected a positive integer")
    if dim is not None and n != dim:
        raise EndomorphismFormatError(f"field 'dim': document has dimension {n}, algebra has {dim}")
    params = doc.get("params", [])
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        raise EndomorphismFormatError("field 'params': expected an array of strings")
    rows = doc.get(key)
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise EndomorphismFormatError(f"field '{key}': expected {n} arrays of {n} entries")
    out = []
    for r, row in enumerate(rows):
        vals = []
        for c, x in enumerate(row):
            try:
                vals.append(parse_scalar(x, params))
            except ScalarParseError as exc:
                raise EndomorphismFormatError(f"{key}[{r}][{c}]: {exc}") from None
        out.append(tuple(vals))
    return tuple(out)


def load_endomorphism(text: str, dim: int | None = None) -> Endomorphism:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EndomorphismFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return Endomorphism(parse_endomorphism(doc, dim))


def dump_endomorphism(J: Endomorphism | Metric) -> dict:
    doc: dict = {"dim": len(J.matrix)}
    params = sorted(J.parameters)
    if params:
        doc["params"] = params
    if isinstance(J, Metric):
        doc["symmetric"] = True
    doc["rows"] = [[scalar_str(x) for x in r] for r in J.matrix]
    return doc
