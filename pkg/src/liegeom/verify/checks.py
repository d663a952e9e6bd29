"""Exact verification of parametric families and polynomial systems."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..algebra import LieAlgebra, catalog
from ..curvature import DEFAULT_MONOMIAL_CAP, BudgetExceeded, DegenerateMetricError, Metric, ricci
from ..forms import AltForm, ce_differential, pfaffian, wedge
from ..hitchin import Classification, classify_dω
from ..linalg import Matrix, is_symmetric, is_zero, matmul, rank
from ..scalar import (
    Poly,
    RationalFunction,
    Scalar,
    free_parameters,
    numer_denom,
    parse_scalar,
    scalar_str,
    substitute,
    var,
)
from ..structures import (
    Endomorphism,
    StructureKind,
    check_square,
    compatibility_residual,
    linear_compatibility_residual,
    nijenhuis,
    square_residual,
)
from .families import Family, sample_family
from .fixtures import fixture
from .report import Check, Verdict, show, show_matrix

__all__ = [
    "compare_matrix",
    "compare_scalar",
    "generic_two_form",
    "psi_operator",
    "rational_function_sqrt",
    "semi_kahler_components",
    "verify_complex_families_G4",
    "verify_family_hitchin",
    "verify_family_semi_para_kahler",
    "verify_semi_kahler_system",
]

PARA = StructureKind.PARACOMPLEX
COMPLEX = StructureKind.COMPLEX


# -- small exact helpers ---------------------------------------------------------------


def _simplify(x: Scalar) -> Scalar:
    return x.cancel() if isinstance(x, RationalFunction) else x


def _simplify_matrix(m: Matrix) -> Matrix:
    return tuple(tuple(_simplify(x) for x in r) for r in m)


def compare_scalar(name: str, computed: Scalar, printed: Scalar) -> Check:
    ok = computed == printed
    details = {"computed": show(computed), "printed": show(printed)}
    return Check(name, ok, details)


def compare_matrix(name: str, computed: Matrix, printed: Matrix) -> Check:
    """Entrywise exact comparison; failing entries are itemized (1-based)."""
    diffs = []
    for i, (rc, rp) in enumerate(zip(computed, printed), 1):
        for j, (a, b) in enumerate(zip(rc, rp), 1):
            if a != b:
                diffs.append(f"({i},{j}): computed {show(a)}, printed {show(b)}")
    details: dict = {"computed": show_matrix(computed), "printed": show_matrix(printed)}
    if diffs:
        details["differing_entries"] = diffs
    return Check(name, not diffs, details)


def _zero_check(name: str, m: Matrix) -> Check:
    nz = [f"({i},{j}): {show(x)}" for i, r in enumerate(m, 1) for j, x in enumerate(r, 1) if x != 0]
    return Check(name, not nz, {"nonzero_residual_entries": nz} if nz else {})


def _first_nonzero_entries(m: Matrix, limit: int = 6) -> list[str]:
    out = [f"({i},{j}): {show(x)}" for i, r in enumerate(m, 1) for j, x in enumerate(r, 1) if x != 0]
    return out[:limit]


def generic_two_form(n: int = 6) -> AltForm:
    """``Σ_{i<j} w_ij e^i∧e^j`` with one parameter per component."""
    return AltForm.from_terms(n, 2, {(i, j): var(f"w{i}{j}") for i in range(1, n + 1) for j in range(i + 1, n + 1)})


def semi_kahler_components(alg: LieAlgebra, omega: AltForm) -> dict[tuple[int, ...], Scalar]:
    """Nonzero components of the 5-form ``ω ∧ dω``."""
    return dict(wedge(omega, ce_differential(alg, omega)).coeffs)


def rational_function_sqrt(x: Scalar) -> Scalar | None:
    """An exact ``r`` with ``r² = x`` over the rationals, or ``None``.

    Factorization is delegated to sympy; the returned root is re-squared
    exactly before it is trusted.
    """
    import sympy

    x = _simplify(x)
    num, den = numer_denom(x)
    names = sorted(free_parameters(x))
    syms = sympy.symbols(names) if names else ()
    local = dict(zip(names, syms if isinstance(syms, (list, tuple)) else (syms,)))

    def root(p: Scalar):
        expr = sympy.sympify(scalar_str(p).replace("^", "**"), locals=local)
        coeff, factors = sympy.factor_list(expr)
        coeff = sympy.Rational(coeff)
        if coeff < 0:
            return None
        rc = sympy.sqrt(coeff)
        if not rc.is_Rational:
            return None
        out = rc
        for f, m in factors:
            if m % 2:
                return None
            out *= f ** (m // 2)
        return parse_scalar(str(sympy.expand(out)).replace("**", "^"))

    rn, rd = root(num), root(den)
    if rn is None or rd is None:
        return None
    r = _simplify(rn / rd) if isinstance(rd, Poly) else rn / rd
    if r * r != x:
        return None
    return r


# -- the quadratic ω∧dω systems --------------------------------------------------------


def _proportional(p: Scalar, q: Scalar) -> Fraction | None:
    """``c`` with ``p = c·q`` (rational, nonzero), else ``None``."""
    if not isinstance(p, Poly) or not isinstance(q, Poly) or set(p.terms) != set(q.terms):
        return None
    mono = next(iter(p.terms))
    c = Fraction(p.terms[mono]) / Fraction(q.terms[mono])
    if all(Fraction(p.terms[m]) == c * Fraction(q.terms[m]) for m in p.terms):
        return c
    return None


def _span_rank(polys: Sequence[Poly]) -> int:
    monos = sorted({m for p in polys for m in p.terms})
    rows = [tuple(p.terms.get(m, 0) for m in monos) for p in polys]
    return rank(rows) if rows else 0


def _index_label(idx: tuple[int, ...]) -> str:
    return "(" + ",".join(map(str, idx)) + ")"


def verify_semi_kahler_system(alg_name: str) -> Verdict:
    """Match the nonzero components of ``ω∧dω`` (generic ω) with the printed system, both ways."""
    fx = fixture(f"{alg_name}.system")
    printed = fx.value()
    alg = catalog(alg_name)
    comps = semi_kahler_components(alg, generic_two_form(alg.dim))
    computed = [(k, v) for k, v in sorted(comps.items())]

    matches, unmatched_printed = [], []
    for pos, p in enumerate(printed, 1):
        hit = next(((k, c) for k, v in computed if (c := _proportional(p, v)) is not None), None)
        if hit is None:
            unmatched_printed.append(f"#{pos}: {show(p)}")
        else:
            matches.append(f"printed #{pos} = {show(hit[1])} * component {_index_label(hit[0])}")
    unmatched_computed = [
        f"{_index_label(k)}: {show(v)}" for k, v in computed if all(_proportional(v, p) is None for p in printed)
    ]
    r_comp = _span_rank([v for _, v in computed])
    r_print = _span_rank(printed)
    r_both = _span_rank([v for _, v in computed] + list(printed))
    checks = [
        Check("every printed polynomial is a rational multiple of a computed component", not unmatched_printed,
              {"unmatched_printed": unmatched_printed} if unmatched_printed else {}),
        Check("every computed component is a rational multiple of a printed polynomial", not unmatched_computed,
              {"unmatched_computed": unmatched_computed} if unmatched_computed else {}),
        Check("computed and printed generators span the same rational space",
              r_comp == r_print == r_both,
              {"rank_computed": r_comp, "rank_printed": r_print, "rank_union": r_both}),
    ]
    info = {
        "computed_components": [f"{_index_label(k)}: {show(v)}" for k, v in computed],
        "matches": matches,
        "counts": {"computed": len(computed), "printed": len(printed)},
    }
    return Verdict.from_checks(
        f"{alg_name}.semi_kahler_system",
        f"omega ^ d omega = 0 for a generic 2-form on {alg_name} versus the printed quadratic system",
        checks,
        references=[fx.reference],
        info=info,
    )


# -- semi-para-Kähler families --------------------------------------------------------


def verify_family_semi_para_kahler(
    alg: LieAlgebra,
    f: Family,
    P: Endomorphism,
    *,
    expected_scalar: Scalar | None = None,
    samples: int = 3,
    seed: int = 0,
    monomial_cap: int | None = DEFAULT_MONOMIAL_CAP,
    item: str | None = None,
    references: Sequence[Mapping[str, str]] = (),
    extra_checks: Sequence[Check] = (),
) -> Verdict:
    """``(ω, P, g = ω(·, P·))`` for a parametric 2-form family.

    ``ω∧dω = 0`` and ``ω(P·, P·) = -ω`` are decided exactly.  The scalar
    curvature is computed over rational functions; if that exceeds
    ``monomial_cap`` the ``samples`` deterministic instances are used and the
    check is labelled sampled.
    """
    if not check_square(P, PARA):
        raise ValueError("P must satisfy P² = Id with equal eigenspace dimensions")
    omega = f.obj
    if not isinstance(omega, AltForm) or omega.degree != 2:
        raise ValueError("verify_family_semi_para_kahler needs a 2-form family")
    checks = list(extra_checks)
    sk = semi_kahler_components(alg, omega)
    checks.append(Check("omega ^ d omega = 0", not sk,
                        {"nonzero_components": [f"{_index_label(k)}: {show(v)}" for k, v in sk.items()]} if sk else {}))
    checks.append(_zero_check("omega(P X, P Y) = -omega(X, Y)", compatibility_residual(omega, P, PARA)))
    pf = pfaffian(omega.matrix())
    checks.append(Check("omega nondegenerate (Pfaffian not identically zero)", pf != 0, {"pfaffian": show(pf)}))
    info: dict = {"parameters": list(f.params), "constraints_nonzero": f.constraint_strings()}
    g = Metric(matmul(omega.matrix(), P.matrix))
    info["metric"] = show_matrix(g.matrix)
    if pf != 0:
        try:
            S = _simplify(ricci(alg, g, monomial_cap=monomial_cap).scalar)
            info["scalar_curvature"] = show(S)
            if expected_scalar is not None:
                checks.append(compare_scalar("scalar curvature", S, expected_scalar))
        except BudgetExceeded as exc:
            info["parametric_curvature"] = f"budget exceeded at {exc.stage} ({exc.monomials} > {exc.cap} monomials)"
            vals, ok = [], True
            for k in range(samples):
                inst = sample_family(f, seed + k)
                gs = Metric(matmul(inst.obj.matrix(), P.matrix))
                Ss = ricci(alg, gs).scalar
                exp = substitute(expected_scalar, inst.values) if expected_scalar is not None else None
                vals.append({"values": inst.values_str(), "S": show(Ss)})
                if exp is not None and Ss != exp:
                    ok = False
            info["sampled_scalar_curvature"] = vals
            if expected_scalar is not None:
                checks.append(Check("scalar curvature", ok, {"expected": show(expected_scalar)}, sampled=samples))
    return Verdict.from_checks(
        item or f"{f.name}.semi_para_kahler",
        f"semi-para-Kähler structure (omega, P, omega(., P .)) for family {f.name}",
        checks,
        references=references,
        info=info,
    )


def verify_family_hitchin(
    alg: LieAlgebra,
    f: Family,
    *,
    expect: str,
    seed: int = 0,
    item: str | None = None,
    references: Sequence[Mapping[str, str]] = (),
) -> Verdict:
    """Hitchin type of ``dω`` over a 2-form family.

    ``expect="degenerate"``: ``λ`` vanishes identically.  ``expect="para"``:
    ``λ`` is the square of a nonzero rational function (so ``λ > 0`` wherever
    it is defined and nonzero), and at the sample the normalized
    operator squares to the identity and is not integrable.
    The sample is the ``seed``-th valid assignment.
    """
    h = classify_dω(alg, f.obj)
    lam = _simplify(h.lam)
    checks: list[Check] = []
    info: dict = {"lambda": show(lam)}
    if expect == "degenerate":
        checks.append(Check("lambda(d omega) = 0 identically", lam == 0, {"lambda": show(lam)}))
    elif expect == "para":
        checks.append(Check("lambda(d omega) not identically zero", lam != 0))
        r = rational_function_sqrt(lam) if lam != 0 else None
        checks.append(Check("lambda is the square of a rational function", r is not None,
                            {"sqrt_lambda": show(r)} if r is not None else {}))
        inst = sample_family(f, seed)
        hs = classify_dω(alg, inst.obj)
        P = hs.normalized
        detail = {"values": inst.values_str(), "lambda": show(hs.lam), "classification": hs.classification.value}
        ok = hs.classification is Classification.PARA and P is not None
        checks.append(Check("paraType at the sample", ok, detail))
        if ok:
            N = nijenhuis(alg, P, PARA)
            checks.append(Check("induced paracomplex structure not integrable at the sample", not N.is_zero))
    else:
        raise ValueError(f"unknown expectation {expect!r}")
    return Verdict.from_checks(
        item or f"{f.name}.hitchin",
        f"Hitchin type of d omega for family {f.name}",
        checks,
        references=references,
        info=info,
    )


# -- complex structures on G4 ------------------------------------------------------------


def psi_operator(index: int) -> tuple[Endomorphism, dict[str, Scalar]]:
    """``J = (ψ_ij)`` after the compatibility relations and the family substitutions.

    Substitutions are applied repeatedly until nothing changes, so chains such
    as ``ψ_16`` in terms of ``ψ_15`` resolve.  Returns ``J`` and the merged
    relation table.
    """
    if index not in (1, 2, 3, 4):
        raise ValueError("family index must be 1..4")
    rel = {**fixture("G4.psi_compat").value(), **fixture(f"G4.psi_family{index}").value()}
    M = [[var(f"psi{i}{j}") for j in range(1, 7)] for i in range(1, 7)]
    for _ in range(len(rel) + 1):
        new = [[_simplify(substitute(x, rel)) for x in r] for r in M]
        if new == M:
            break
        M = new
    else:
        raise RuntimeError("substitution chain does not terminate")
    return Endomorphism(tuple(tuple(r) for r in M)), rel


def verify_complex_families_G4(
    index: int, *, samples: int = 3, seed: int = 0, monomial_cap: int | None = DEFAULT_MONOMIAL_CAP
) -> Verdict:
    """Build ``J`` for one printed family and decide ``J² = -Id``, compatibility with Ω₀₁ and ``N_J = 0``."""
    alg = catalog("G4")
    omega = fixture("Omega01").value()
    J, rel = psi_operator(index)
    fam = Family.of(f"psi{index}", "G4", J)
    refs = [fixture("G4.psi_compat").reference, fixture(f"G4.psi_family{index}").reference, fixture("Omega01").reference]
    overlap = sorted(set(fixture("G4.psi_compat").value()) & set(fixture(f"G4.psi_family{index}").value()))
    info: dict = {
        "free_parameters": sorted(J.parameters),
        "constraints_nonzero": fam.constraint_strings(),
        "J": show_matrix(J.matrix),
    }
    if overlap:
        info["relations_overriding_compatibility"] = overlap
    checks = [
        _zero_check("J^2 = -Id", _simplify_matrix(square_residual(J, COMPLEX))),
        _zero_check("Omega01(J X, J Y) = Omega01(X, Y)", _simplify_matrix(compatibility_residual(omega, J, COMPLEX))),
        _zero_check("Omega01(J X, Y) + Omega01(X, J Y) = 0",
                    _simplify_matrix(linear_compatibility_residual(omega, J))),
    ]
    N = nijenhuis(alg, J, COMPLEX)
    nz = {k: _simplify(v) for k, v in N.components.items()}
    nz = {k: v for k, v in nz.items() if v != 0}
    checks.append(Check("N_J = 0", not nz,
                        {"nonzero_components": [f"{_index_label(k)}: {show(v)}" for k, v in sorted(nz.items())[:8]]}
                        if nz else {}))
    # pointwise view at the first admissible sample
    inst = sample_family(fam, seed)
    Js = inst.obj
    info["first_sample"] = {
        "values": inst.values_str(),
        "J^2 = -Id": is_zero(square_residual(Js, COMPLEX)),
        "N_J = 0": nijenhuis(alg, Js, COMPLEX).is_zero,
    }
    g = None
    gm = _simplify_matrix(matmul(omega.matrix(), J.matrix))
    info["g_J"] = show_matrix(gm)
    if is_symmetric(gm):
        g = Metric(gm)
    else:
        info["g_J_symmetric"] = False
    data = None
    if g is not None:
        try:
            data = ricci(alg, g, monomial_cap=monomial_cap)
            info["scalar_curvature"] = show(_simplify(data.scalar))
        except BudgetExceeded as exc:
            info["parametric_curvature"] = f"budget exceeded at {exc.stage} ({exc.monomials} > {exc.cap} monomials)"
        except DegenerateMetricError:
            info["g_J_degenerate"] = True
    if index == 4:
        refs += [fixture(k).reference for k in ("G4.J4", "G4.gJ4", "G4.Ric4", "G4.S4")]
        checks.append(compare_matrix("J matches the printed J4", J.matrix, fixture("G4.J4").value().matrix))
        checks.append(compare_matrix("g_J matches the printed g_J4", gm, fixture("G4.gJ4").value().matrix))
        if data is not None:
            checks.append(compare_matrix("Ricci tensor matches the printed Ric4",
                                         _simplify_matrix(data.ricci), fixture("G4.Ric4").value().matrix))
            checks.append(compare_scalar("scalar curvature matches the printed S4",
                                         _simplify(data.scalar), fixture("G4.S4").value()))
        else:
            checks.append(Check("curvature of g_J computed", False, {"reason": "see info"}))
    return Verdict.from_checks(
        f"G4.complex_family{index}",
        f"complex structure family {index} compatible with Omega01 on G4",
        checks,
        references=refs,
        info=info,
    )
