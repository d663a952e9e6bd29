"""Lie algebras given by structure constants, and the bundled catalog.

Basis indices are 1-based in every public signature, file and report;
``LieAlgebra.table`` is the 0-based dense array used by inner loops.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .linalg import Matrix, as_matrix
from .scalar import Scalar, ScalarParseError, free_parameters, parse_scalar, scalar_str

__all__ = [
    "CATALOG_NAMES",
    "AlgebraFormatError",
    "JacobiFailure",
    "JacobiReport",
    "LieAlgebra",
    "adjoint",
    "catalog",
    "direct_sum",
    "dump_algebra",
    "load_algebra",
    "parse_algebra",
    "validate_jacobi",
]


class AlgebraFormatError(ValueError):
    """Malformed algebra document (bad field, duplicate entry, i >= j ...)."""


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants ``C_ij^k`` stored for ``i < j`` only.

    ``constants`` maps 1-based ``(i, j, k)`` with ``i < j`` to a nonzero scalar;
    antisymmetry is implied.
    """

    dim: int
    constants: Mapping[tuple[int, int, int], Scalar]
    labels: tuple[str, ...] = ()
    name: str = ""
    table: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.dim
        if n < 1:
            raise AlgebraFormatError("dimension must be positive")
        clean = {}
        for (i, j, k), c in self.constants.items():
            if not (1 <= i < j <= n and 1 <= k <= n):
                raise AlgebraFormatError(f"bracket index out of range or not i<j: {(i, j, k)}")
            if c != 0:
                clean[(i, j, k)] = c
        object.__setattr__(self, "constants", dict(sorted(clean.items())))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(1, n + 1)))
        elif len(self.labels) != n:
            raise AlgebraFormatError(f"expected {n} labels, got {len(self.labels)}")
        t = [[[0] * n for _ in range(n)] for _ in range(n)]
        for (i, j, k), c in clean.items():
            t[i - 1][j - 1][k - 1] = c
            t[j - 1][i - 1][k - 1] = -c
        object.__setattr__(self, "table", tuple(tuple(tuple(r) for r in m) for m in t))

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, Scalar]], **kw) -> LieAlgebra:
        """Build from ``{(i, j): {k: c}}`` meaning ``[e_i, e_j] = sum_k c e_k``; any order of i, j."""
        consts: dict[tuple[int, int, int], Scalar] = {}
        for (i, j), image in brackets.items():
            if i == j:
                raise AlgebraFormatError(f"[e{i}, e{i}] must vanish")
            sign = 1 if i < j else -1
            a, b = min(i, j), max(i, j)
            for k, c in image.items():
                key = (a, b, k)
                if key in consts:
                    raise AlgebraFormatError(f"bracket [e{a}, e{b}] given twice")
                consts[key] = sign * c
        return cls(dim, consts, **kw)

    def c(self, i: int, j: int, k: int) -> Scalar:
        """``C_ij^k`` for any 1-based i, j (antisymmetric)."""
        return self.table[i - 1][j - 1][k - 1]

    def bracket(self, x, y) -> tuple[Scalar, ...]:
        """Bracket of two coefficient vectors (0-based sequences of length n)."""
        n = self.dim
        out: list[Scalar] = [0] * n
        t = self.table
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0 or i == j:
                    continue
                row = t[i][j]
                xy = None
                for k in range(n):
                    if row[k] != 0:
                        if xy is None:
                            xy = x[i] * y[j]
                        out[k] = out[k] + xy * row[k]
        return tuple(out)

    @property
    def is_rational(self) -> bool:
        return not self.parameters

    @property
    def parameters(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for c in self.constants.values():
            out |= free_parameters(c)
        return out

    def brackets_str(self) -> list[str]:
        """Human-readable nonzero brackets, e.g. ``[e1, e2] = e3``."""
        lines = []
        by_pair: dict[tuple[int, int], list[str]] = {}
        for (i, j, k), c in self.constants.items():
            cs = scalar_str(c)
            term = self.labels[k - 1] if cs == "1" else f"-{self.labels[k - 1]}" if cs == "-1" else f"{cs}*{self.labels[k - 1]}"
            by_pair.setdefault((i, j), []).append(term)
        for (i, j), terms in by_pair.items():
            lines.append(f"[{self.labels[i - 1]}, {self.labels[j - 1]}] = " + " + ".join(terms).replace("+ -", "- "))
        return lines


@dataclass(frozen=True)
class JacobiFailure:
    i: int
    j: int
    k: int
    t: int
    residual: Scalar


@dataclass(frozen=True)
class JacobiReport:
    failures: tuple[JacobiFailure, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def validate_jacobi(alg: LieAlgebra) -> JacobiReport:
    """Check ``sum_s C_ij^s C_sk^t + C_jk^s C_si^t + C_ki^s C_sj^t = 0`` for all i<j<k, t."""
    n = alg.dim
    t_ = alg.table
    failures = []
    for i, j, k in combinations(range(n), 3):
        for t in range(n):
            r: Scalar = 0
            for s in range(n):
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    x = t_[a][b][s]
                    if x != 0:
                        y = t_[s][c][t]
                        if y != 0:
                            r = r + x * y
            if r != 0:
                failures.append(JacobiFailure(i + 1, j + 1, k + 1, t + 1, r))
    return JacobiReport(tuple(failures))


def adjoint(alg: LieAlgebra, i: int) -> Matrix:
    """Matrix of ``ad_{e_i}``; column j holds the coefficients of ``[e_i, e_j]``."""
    if not 1 <= i <= alg.dim:
        raise IndexError(f"basis index {i} out of range 1..{alg.dim}")
    n = alg.dim
    row = alg.table[i - 1]
    return as_matrix([[row[j][k] for j in range(n)] for k in range(n)])


# Flat tables, brackets exactly as listed for the four semidirect products.
_SL2 = {(4, 5): {5: 2}, (4, 6): {6: -2}, (5, 6): {4: 1}}
_CATALOG: dict[str, tuple[int, dict]] = {
    "G1": (6, {(1, 2): {2: 1}, (1, 3): {3: 1}, **_SL2,
               (2, 4): {2: 1}, (2, 5): {3: 1}, (3, 4): {3: -1}, (3, 6): {2: 1}}),
    "G2": (6, {(1, 2): {3: 1}, **_SL2,
               (4, 1): {1: 1}, (5, 2): {1: 1}, (6, 1): {2: 1}, (4, 2): {2: -1}}),
    "G3": (6, {**_SL2, (4, 1): {1: 2}, (5, 2): {1: 2}, (6, 1): {2: 1},
               (4, 3): {3: -2}, (5, 3): {2: 1}, (6, 2): {3: 2}}),
    "G4": (6, {(4, 5): {6: 1}, (4, 6): {5: -1}, (5, 6): {4: 1},
               (4, 2): {3: 1}, (5, 1): {3: -1}, (6, 1): {2: 1},
               (4, 3): {2: -1}, (5, 3): {1: 1}, (6, 2): {1: -1}}),
    "A3.1": (3, {}),
    "A3.3": (3, {(1, 2): {3: 1}}),
    "A3.5": (3, {(1, 2): {2: 1}, (1, 3): {3: 1}}),
    "sl2": (3, {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}),
    "so3": (3, {(1, 2): {3: 1}, (1, 3): {2: -1}, (2, 3): {1: 1}}),
}

CATALOG_NAMES = tuple(_CATALOG)


def catalog(name: str) -> LieAlgebra:
    """Bundled algebra by name: G1..G4, A3.1, A3.3, A3.5, sl2, so3."""
    try:
        dim, brackets = _CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog algebra {name!r}; known: {', '.join(CATALOG_NAMES)}") from None
    return LieAlgebra.from_brackets(dim, brackets, name=name)


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {}, name=f"abelian{n}")


def direct_sum(*parts: LieAlgebra) -> LieAlgebra:
    """``L_1 ⊕ L_2 ⊕ ...`` with the bases concatenated in order."""
    if not parts:
        raise ValueError("direct_sum needs at least one algebra")
    consts: dict[tuple[int, int, int], Scalar] = {}
    offset = 0
    for part in parts:
        for (i, j, k), c in part.constants.items():
            consts[(i + offset, j + offset, k + offset)] = c
        offset += part.dim
    return LieAlgebra(offset, consts, name="⊕".join(p.name or f"L{p.dim}" for p in parts))


# -- file format ----------------------------------------------------------------


def parse_algebra(doc: Mapping) -> LieAlgebra:
    """Build an algebra from a decoded JSON document.

    ``{"dim": 6, "labels": [...], "params": [...], "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}, ...]}``
    """
    if not isinstance(doc, Mapping):
        raise AlgebraFormatError("algebra document must be an object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise AlgebraFormatError("field 'dim': expected a positive integer")
    params = doc.get("params", [])
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        raise AlgebraFormatError("field 'params': expected an array of strings")
    labels = doc.get("labels", [])
    if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
        raise AlgebraFormatError("field 'labels': expected an array of strings")
    entries = doc.get("brackets", [])
    if not isinstance(entries, list):
        raise AlgebraFormatError("field 'brackets': expected an array")
    consts: dict[tuple[int, int, int], Scalar] = {}
    for pos, e in enumerate(entries):
        where = f"brackets[{pos}]"
        if not isinstance(e, Mapping) or set(e) - {"i", "j", "k", "c"} or not {"i", "j", "k", "c"} <= set(e):
            raise AlgebraFormatError(f"{where}: expected fields i, j, k, c")
        i, j, k = e["i"], e["j"], e["k"]
        if not all(isinstance(x, int) for x in (i, j, k)):
            raise AlgebraFormatError(f"{where}: i, j, k must be integers")
        if not (1 <= i < j <= dim) or not (1 <= k <= dim):
            raise AlgebraFormatError(f"{where}: need 1 <= i < j <= {dim} and 1 <= k <= {dim}, got ({i}, {j}, {k})")
        if (i, j, k) in consts:
            raise AlgebraFormatError(f"{where}: duplicate entry ({i}, {j}, {k})")
        try:
            consts[(i, j, k)] = parse_scalar(e["c"], params)
        except ScalarParseError as exc:
            raise AlgebraFormatError(f"{where}.c: {exc}") from None
    return LieAlgebra(dim, consts, labels=tuple(labels), name=str(doc.get("name", "")))


def load_algebra(text: str) -> LieAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_algebra(doc)


def dump_algebra(alg: LieAlgebra) -> dict:
    params = sorted(alg.parameters)
    doc = {"dim": alg.dim, "labels": list(alg.labels)}
    if alg.name:
        doc["name"] = alg.name
    if params:
        doc["params"] = params
    doc["brackets"] = [{"i": i, "j": j, "k": k, "c": scalar_str(c)} for (i, j, k), c in alg.constants.items()]
    return doc


def iter_pairs(n: int) -> Iterable[tuple[int, int]]:
    return combinations(range(1, n + 1), 2)
