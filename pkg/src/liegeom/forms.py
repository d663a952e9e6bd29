"""Alternating forms on the dual of a Lie algebra.

Forms are stored on strictly increasing 1-based index tuples.  The wedge
product sums over shuffles with no ``1/(p! q!)`` prefactor, and interior
products contract the first slot.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .algebra import LieAlgebra
from .linalg import Matrix, det, nullspace, rref
from .scalar import (
    Scalar,
    ScalarParseError,
    evaluate,
    free_parameters,
    parse_scalar,
    scalar_str,
    substitute,
    var,
)

__all__ = [
    "AltForm",
    "ClosedFormSpace",
    "FormFormatError",
    "SemiKahlerResult",
    "SymplecticVerdict",
    "ce_differential",
    "closed_2form_space",
    "det_2form",
    "dump_form",
    "form_from_matrix",
    "interior",
    "is_semi_kahler_form",
    "load_form",
    "parse_form",
    "pfaffian",
    "sample_values",
    "symplectic_exists",
    "unit",
    "volume_form",
    "wedge",
]


class FormFormatError(ValueError):
    """Malformed form document."""


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx`` and the sorted tuple; sign 0 on repeats."""
    s = sorted(idx)
    for a, b in zip(s, s[1:]):
        if a == b:
            return 0, ()
    inv = 0
    for p in range(len(idx)):
        for q in range(p + 1, len(idx)):
            if idx[p] > idx[q]:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(s)


@dataclass(frozen=True)
class AltForm:
    """A degree-``degree`` alternating form on an ``dim``-dimensional space."""

    dim: int
    degree: int
    coeffs: Mapping[tuple[int, ...], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree:
            raise ValueError("degree must be non-negative")
        clean = {}
        for idx, c in self.coeffs.items():
            idx = tuple(idx)
            if len(idx) != self.degree:
                raise ValueError(f"index tuple {idx} does not have length {self.degree}")
            if any(not 1 <= i <= self.dim for i in idx):
                raise ValueError(f"index tuple {idx} out of range 1..{self.dim}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index tuple {idx} is not strictly increasing")
            if c != 0:
                clean[idx] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> AltForm:
        return cls(dim, degree, {})

    @classmethod
    def from_terms(cls, dim: int, degree: int, terms: Mapping[Sequence[int], Scalar]) -> AltForm:
        """Accept unsorted index tuples; signs are applied and repeats dropped."""
        acc: dict[tuple[int, ...], Scalar] = {}
        for idx, c in terms.items():
            sign, key = _sort_sign(tuple(idx))
            if sign == 0:
                continue
            acc[key] = acc.get(key, 0) + sign * c
        return cls(dim, degree, acc)

    @classmethod
    def basis(cls, dim: int, *indices: int) -> AltForm:
        """``e^{i1} ∧ ... ∧ e^{ik}``."""
        return cls.from_terms(dim, len(indices), {indices: 1})

    # -- access -------------------------------------------------------------

    def __getitem__(self, idx: Sequence[int]) -> Scalar:
        """Component on any index tuple, antisymmetrized."""
        sign, key = _sort_sign(tuple(idx))
        if sign == 0:
            return 0
        c = self.coeffs.get(key, 0)
        return c if sign > 0 else -c

    def matrix(self) -> Matrix:
        """Antisymmetric matrix ``w[i][j] = ω(e_i, e_j)`` of a 2-form (0-based)."""
        if self.degree != 2:
            raise ValueError("matrix() needs a 2-form")
        n = self.dim
        m = [[0] * n for _ in range(n)]
        for (i, j), c in self.coeffs.items():
            m[i - 1][j - 1] = c
            m[j - 1][i - 1] = -c
        return tuple(tuple(r) for r in m)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def parameters(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for c in self.coeffs.values():
            out |= free_parameters(c)
        return out

    def substitute(self, values: Mapping[str, Scalar]) -> AltForm:
        return AltForm(self.dim, self.degree, {k: substitute(c, values) for k, c in self.coeffs.items()})

    def evaluate(self, values: Mapping[str, object], **kw) -> dict[tuple[int, ...], object]:
        return {k: evaluate(c, values, **kw) for k, c in self.coeffs.items()}

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: AltForm) -> None:
        if self.dim != other.dim or self.degree != other.degree:
            raise ValueError("forms of different dimension or degree")

    def __add__(self, other: AltForm) -> AltForm:
        self._check(other)
        acc = dict(self.coeffs)
        for k, c in other.coeffs.items():
            acc[k] = acc.get(k, 0) + c
        return AltForm(self.dim, self.degree, acc)

    def __neg__(self) -> AltForm:
        return AltForm(self.dim, self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: AltForm) -> AltForm:
        return self + (-other)

    def __mul__(self, c: Scalar) -> AltForm:
        if isinstance(c, AltForm):
            return NotImplemented
        return AltForm(self.dim, self.degree, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __xor__(self, other: AltForm) -> AltForm:
        """``a ^ b`` is the wedge product."""
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AltForm):
            return NotImplemented
        if self.dim != other.dim or self.degree != other.degree:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(k, 0) == other.coeffs.get(k, 0) for k in keys)

    __hash__ = None

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for idx, c in self.coeffs.items():
            basis = "e" + "".join(str(i) for i in idx) if self.dim < 10 else "e^" + ",".join(map(str, idx))
            cs = scalar_str(c)
            if " " in cs:
                parts.append(f"+ ({cs})*{basis}")
            elif cs in ("1", "-1"):
                parts.append(f"{cs[0] if cs == '-1' else '+'} {basis}")
            elif cs.startswith("-"):
                parts.append(f"- {cs[1:]}*{basis}")
            else:
                parts.append(f"+ {cs}*{basis}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def form_from_matrix(m: Matrix) -> AltForm:
    """2-form from an antisymmetric matrix; only the upper triangle is read."""
    n = len(m)
    return AltForm(n, 2, {(i + 1, j + 1): m[i][j] for i in range(n) for j in range(i + 1, n)})


def volume_form(dim: int, c: Scalar = 1) -> AltForm:
    return AltForm(dim, dim, {tuple(range(1, dim + 1)): c})


# -- exterior calculus ----------------------------------------------------------


def ce_differential(alg: LieAlgebra, alpha: AltForm) -> AltForm:
    """Chevalley-Eilenberg differential of a form of any degree.

    ``(dα)(X0..Xk) = Σ_{p<q} (-1)^{p+q} α([Xp, Xq], X0, .., X̂p, .., X̂q, ..)``.
    """
    if alpha.dim != alg.dim:
        raise ValueError(f"form dimension {alpha.dim} does not match algebra dimension {alg.dim}")
    n, k = alg.dim, alpha.degree
    if k + 1 > n or alpha.is_zero:
        return AltForm.zero(n, k + 1)
    t = alg.table
    out: dict[tuple[int, ...], Scalar] = {}
    for idx in combinations(range(1, n + 1), k + 1):
        total: Scalar = 0
        for p, q in combinations(range(k + 1), 2):
            row = t[idx[p] - 1][idx[q] - 1]
            rest = idx[:p] + idx[p + 1 : q] + idx[q + 1 :]
            sgn = -1 if (p + q) & 1 else 1
            for s in range(n):
                c = row[s]
                if c == 0:
                    continue
                val = alpha[(s + 1,) + rest]
                if val != 0:
                    total = total + sgn * c * val
        if total != 0:
            out[idx] = total
    return AltForm(n, k + 1, out)


def wedge(alpha: AltForm, beta: AltForm) -> AltForm:
    """Shuffle-sum wedge product (no combinatorial prefactor)."""
    if alpha.dim != beta.dim:
        raise ValueError("wedge of forms on spaces of different dimension")
    deg = alpha.degree + beta.degree
    if deg > alpha.dim:
        raise ValueError(f"wedge degree {deg} exceeds dimension {alpha.dim}")
    acc: dict[tuple[int, ...], Scalar] = {}
    for i, a in alpha.coeffs.items():
        for j, b in beta.coeffs.items():
            sign, key = _sort_sign(i + j)
            if sign == 0:
                continue
            term = a * b
            acc[key] = acc.get(key, 0) + (term if sign > 0 else -term)
    return AltForm(alpha.dim, deg, acc)


def interior(x: Sequence[Scalar], omega: AltForm) -> AltForm:
    """First-slot contraction ``(i_X Ω)(...) = Ω(X, ...)``; ``x`` holds 0-based coefficients."""
    if len(x) != omega.dim:
        raise ValueError(f"vector of length {len(x)} for a form on dimension {omega.dim}")
    if omega.degree < 1:
        raise ValueError("cannot contract a 0-form")
    acc: dict[tuple[int, ...], Scalar] = {}
    for idx, c in omega.coeffs.items():
        for pos, m in enumerate(idx):
            xm = x[m - 1]
            if xm == 0:
                continue
            key = idx[:pos] + idx[pos + 1 :]
            term = xm * c
            acc[key] = acc.get(key, 0) + (-term if pos & 1 else term)
    return AltForm(omega.dim, omega.degree - 1, acc)


def unit(n: int, i: int) -> tuple[int, ...]:
    """Coefficient vector of ``e_i`` (1-based)."""
    return tuple(1 if k == i - 1 else 0 for k in range(n))


# -- nondegeneracy ----------------------------------------------------------------


def det_2form(omega: AltForm) -> Scalar:
    """Determinant of the antisymmetric coefficient matrix."""
    if omega.degree != 2:
        raise ValueError("det_2form needs a 2-form")
    return det(omega.matrix())


def pfaffian(m: Matrix) -> Scalar:
    """Pfaffian by expansion along the first row (independent of ``det``)."""
    n = len(m)
    if n == 0:
        return 1
    if n & 1:
        return 0

    def rec(idx: tuple[int, ...]) -> Scalar:
        if not idx:
            return 1
        first, rest = idx[0], idx[1:]
        total: Scalar = 0
        for pos, j in enumerate(rest):
            a = m[first][j]
            if a == 0:
                continue
            sub = rec(rest[:pos] + rest[pos + 1 :])
            term = a * sub
            total = total + (-term if pos & 1 else term)
        return total

    return rec(tuple(range(n)))


@dataclass(frozen=True)
class SemiKahlerResult:
    holds: bool
    differential: AltForm
    residual: AltForm


def is_semi_kahler_form(alg: LieAlgebra, omega: AltForm) -> SemiKahlerResult:
    """Test ``ω ∧ dω = 0`` exactly; the residual 5-form (generally ``ω ∧ dω``) is returned."""
    if omega.degree != 2:
        raise ValueError("semi-Kähler test needs a 2-form")
    d = ce_differential(alg, omega)
    res = wedge(omega, d) if omega.dim >= 5 else AltForm.zero(omega.dim, 0)
    return SemiKahlerResult(res.is_zero, d, res)


# -- closed 2-forms -----------------------------------------------------------------


def _d2_matrix(alg: LieAlgebra) -> tuple[Matrix, list[tuple[int, int]]]:
    """Matrix of ``d`` from 2-forms to 3-forms in the increasing-tuple bases."""
    n = alg.dim
    pairs = list(combinations(range(1, n + 1), 2))
    triples = list(combinations(range(1, n + 1), 3))
    cols = []
    for p in pairs:
        d = ce_differential(alg, AltForm(n, 2, {p: 1}))
        cols.append([d.coeffs.get(t, 0) for t in triples])
    rows = tuple(tuple(cols[c][r] for c in range(len(pairs))) for r in range(len(triples)))
    return rows, pairs


@dataclass(frozen=True)
class ClosedFormSpace:
    """Closed 2-forms as a reduced basis.

    Basis element ``i`` has coefficient 1 at ``pivots[i]`` and 0 at the other
    pivots, so parameter ``t_i`` of ``generic`` equals the coefficient on that
    pair.  ``names`` maps ``t_i`` to the matching ``w_ab`` name.
    """

    algebra: LieAlgebra
    basis: tuple[AltForm, ...]
    pivots: tuple[tuple[int, int], ...]
    parameters: tuple[str, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def names(self) -> dict[str, str]:
        return {t: f"w{a}{b}" for t, (a, b) in zip(self.parameters, self.pivots)}

    def generic(self, names: Sequence[str] | None = None) -> AltForm:
        """``Σ t_i basis_i``; pass ``names`` (e.g. the ``w_ab`` names) to rename the parameters."""
        labels = list(names) if names is not None else list(self.parameters)
        out = AltForm.zero(self.algebra.dim, 2)
        for lab, b in zip(labels, self.basis):
            out = out + b * var(lab)
        return out

    def generic_w(self) -> AltForm:
        return self.generic([self.names[t] for t in self.parameters])


def closed_2form_space(alg: LieAlgebra) -> ClosedFormSpace:
    """Exact nullspace of ``d`` on 2-forms, reduced so pivots name the parameters."""
    if not alg.is_rational:
        raise ValueError("closed_2form_space needs rational structure constants")
    dmat, pairs = _d2_matrix(alg)
    kernel = nullspace(dmat, len(pairs))
    if kernel:
        reduced, piv = rref(tuple(kernel))
    else:
        reduced, piv = (), []
    basis = tuple(AltForm(alg.dim, 2, {pairs[c]: v for c, v in enumerate(row)}) for row in reduced)
    params = tuple(f"t{i}" for i in range(1, len(basis) + 1))
    return ClosedFormSpace(alg, basis, tuple(pairs[c] for c in piv), params)


def sample_values() -> Iterable[int]:
    """1, -1, 2, -2, 3, -3, ..."""
    k = 1
    while True:
        yield k
        yield -k
        k += 1


@dataclass(frozen=True)
class SymplecticVerdict:
    exists: bool
    space: ClosedFormSpace
    determinant: Scalar
    witness: AltForm | None = None
    witness_values: Mapping[str, int] | None = None


def symplectic_exists(alg: LieAlgebra, *, max_magnitude: int = 4) -> SymplecticVerdict:
    """Decide existence of a closed nondegenerate 2-form.

    ``no`` iff the determinant of the generic closed form is the zero
    polynomial.  A ``yes`` witness is found by walking parameter tuples over
    ``1, -1, 2, -2, ...`` in lexicographic order.
    """
    space = closed_2form_space(alg)
    generic = space.generic()
    dpoly = det_2form(generic)
    if dpoly == 0:
        return SymplecticVerdict(False, space, dpoly)
    values = []
    for v in sample_values():
        if abs(v) > max_magnitude:
            break
        values.append(v)
    for assignment in product(values, repeat=space.dimension):
        vals = dict(zip(space.parameters, assignment))
        if evaluate(dpoly, vals) != 0:
            return SymplecticVerdict(True, space, dpoly, generic.substitute(vals), vals)
    # a nonzero polynomial whose degree in each variable is below the grid width
    # cannot vanish on the whole grid; det has degree <= n per variable
    raise RuntimeError("no witness found on the sample grid; raise max_magnitude")


# -- file format ------------------------------------------------------------------


def parse_form(doc: Mapping, dim: int | None = None) -> AltForm:
    """``{"dim": 6, "degree": 2, "params": [...], "terms": [{"indices": [1, 4], "c": "1"}, ...]}``.

    ``dim`` may come from the document or the caller (the algebra it lives on).
    """
    if not isinstance(doc, Mapping):
        raise FormFormatError("form document must be an object")
    degree = doc.get("degree")
    if not isinstance(degree, int) or degree < 0:
        raise FormFormatError("field 'degree': expected a non-negative integer")
    n = doc.get("dim", dim)
    if not isinstance(n, int) or n < 1:
        raise FormFormatError("field 'dim': expected a positive integer (or pass the algebra dimension)")
    if dim is not None and n != dim:
        raise FormFormatError(f"field 'dim': form has dimension {n}, algebra has {dim}")
    params = doc.get("params", [])
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        raise FormFormatError("field 'params': expected an array of strings")
    terms = doc.get("terms", [])
    if not isinstance(terms, list):
        raise FormFormatError("field 'terms': expected an array")
    acc: dict[tuple[int, ...], Scalar] = {}
    for pos, t in enumerate(terms):
        where = f"terms[{pos}]"
        if not isinstance(t, Mapping) or "indices" not in t or "c" not in t:
            raise FormFormatError(f"{where}: expected fields indices, c")
        idx = t["indices"]
        if not isinstance(idx, list) or not all(isinstance(i, int) for i in idx):
            raise FormFormatError(f"{where}.indices: expected an integer array")
        if len(idx) != degree or any(a >= b for a, b in zip(idx, idx[1:])) or any(not 1 <= i <= n for i in idx):
            raise FormFormatError(f"{where}.indices: need {degree} strictly increasing indices in 1..{n}")
        key = tuple(idx)
        if key in acc:
            raise FormFormatError(f"{where}: duplicate indices {idx}")
        try:
            acc[key] = parse_scalar(t["c"], params)
        except ScalarParseError as exc:
            raise FormFormatError(f"{where}.c: {exc}") from None
    return AltForm(n, degree, acc)


def load_form(text: str, dim: int | None = None) -> AltForm:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_form(doc, dim)


def dump_form(form: AltForm) -> dict:
    doc: dict = {"dim": form.dim, "degree": form.degree}
    params = sorted(form.parameters)
    if params:
        doc["params"] = params
    doc["terms"] = [{"indices": list(k), "c": scalar_str(c)} for k, c in form.coeffs.items()]
    return doc
