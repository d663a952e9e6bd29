"""Hitchin's operator ``K_Ω`` for 3-forms on a six-dimensional space.

``K_Ω(X) = A(i_X Ω ∧ Ω)`` where ``A`` identifies a 5-form ``ρ`` with the
vector ``Aρ`` satisfying ``ρ ∧ α = α(Aρ) μ`` for every 1-form ``α``.  With the
5-form written on the left, ``(Aρ)_m = (-1)^m ρ_m / μ_0`` where ``ρ_m`` is the
coefficient of ``e^1∧..ê^m..∧e^6`` and ``μ = μ_0 e^1∧..∧e^6``.  This is the
orientation under which ``K`` of ``e^123 + e^456`` with the standard volume is
``diag(-1,-1,-1,1,1,1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt
from numbers import Rational

from .algebra import LieAlgebra
from .forms import AltForm, ce_differential, det_2form, interior, unit, wedge
from .linalg import identity, is_zero, matmul, scale, sub, trace
from .scalar import Scalar, divide
from .structures import Endomorphism

__all__ = [
    "PAIRING_CONVENTION",
    "Classification",
    "DegenerateFormError",
    "HitchinConsistencyError",
    "HitchinResult",
    "classify_dω",
    "classify_domega",
    "hitchin_operator",
    "rational_sqrt",
]

PAIRING_CONVENTION = "rho ^ alpha = alpha(A rho) mu; mu = omega^omega^omega for 2-forms"


class Classification(str, Enum):
    COMPLEX = "complexType"
    PARA = "paraType"
    DEGENERATE = "degenerate"
    INDEFINITE = "indefinite"


class HitchinConsistencyError(RuntimeError):
    """``K²`` is not a multiple of the identity or ``trace K ≠ 0``: a convention bug, not bad data."""


class DegenerateFormError(ValueError):
    """A nondegenerate 2-form was required."""


@dataclass(frozen=True)
class HitchinResult:
    K: Endomorphism
    lam: Scalar
    classification: Classification
    normalized: Endomorphism | None = None
    volume: Scalar = 1


def rational_sqrt(x: Rational) -> Fraction | None:
    """Exact non-negative square root of a non-negative rational, if it is rational."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def hitchin_operator(omega3: AltForm, mu: AltForm) -> HitchinResult:
    """``K_Ω``, ``λ`` with ``K² = λ Id``, the sign classification and, when ``|λ|`` is a rational square, ``K/√|λ|``."""
    n = omega3.dim
    if n != 6 or omega3.degree != 3:
        raise ValueError("hitchin_operator needs a 3-form on a six-dimensional space")
    if mu.dim != 6 or mu.degree != 6:
        raise ValueError("volume must be a 6-form on the same space")
    mu0 = mu.coeffs.get(tuple(range(1, 7)), 0)
    if mu0 == 0:
        raise ValueError("volume form is zero")
    images = []
    for i in range(1, 7):
        rho = wedge(interior(unit(6, i), omega3), omega3)
        col = []
        for m in range(1, 7):
            rm = rho.coeffs.get(tuple(k for k in range(1, 7) if k != m), 0)
            col.append(divide(rm if m % 2 == 0 else -rm, mu0))
        images.append(col)
    K = Endomorphism.from_images(images)
    if trace(K.matrix) != 0:
        raise HitchinConsistencyError("trace(K) is not zero")
    sq = matmul(K.matrix, K.matrix)
    lam = sq[0][0]
    if not is_zero(sub(sq, identity(6, lam))):
        raise HitchinConsistencyError("K² is not a multiple of the identity")
    normalized = None
    if isinstance(lam, Rational):
        if lam == 0:
            cls = Classification.DEGENERATE
        else:
            cls = Classification.PARA if lam > 0 else Classification.COMPLEX
            root = rational_sqrt(abs(lam))
            if root is not None:
                normalized = Endomorphism(scale(1 / root, K.matrix))
    else:
        cls = Classification.INDEFINITE
    return HitchinResult(K, lam, cls, normalized, mu0)


def classify_dω(alg: LieAlgebra, omega: AltForm) -> HitchinResult:
    """``hitchin_operator(dω, ω∧ω∧ω)`` for a nondegenerate 2-form."""
    if omega.degree != 2 or omega.dim != 6:
        raise ValueError("classify_dω needs a 2-form on a six-dimensional algebra")
    if det_2form(omega) == 0:
        raise DegenerateFormError("2-form is degenerate")
    mu = wedge(wedge(omega, omega), omega)
    return hitchin_operator(ce_differential(alg, omega), mu)


classify_domega = classify_dω

