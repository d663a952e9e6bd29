"""Command-line front end: ``liegeom <command> ...``.

Every command builds one structured document (``schema_version`` plus the
anchor of the operation it ran) and prints it as JSON or as markdown derived
from it.  Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

from .algebra import (
    AlgebraFormatError,
    LieAlgebra,
    catalog,
    direct_sum,
    load_algebra,
    validate_jacobi,
)
from .curvature import DEFAULT_MONOMIAL_CAP, BudgetExceeded, Metric, curvature, einstein_check
from .forms import (
    AltForm,
    FormFormatError,
    ce_differential,
    closed_2form_space,
    det_2form,
    is_semi_kahler_form,
    load_form,
    symplectic_exists,
    volume_form,
)
from .hitchin import HitchinResult, classify_dω, hitchin_operator
from .linalg import is_zero
from .scalar import ScalarParseError, parse_scalar
from .structures import (
    EndomorphismFormatError,
    StructureKind,
    associated_metric,
    load_endomorphism,
    nijenhuis,
    square_residual,
    verify_kahler_triple,
)
from .verify import Family, Settings, Status, known_discrepancies, report_document, reproduce_theorem
from .verify.checks import (
    generic_two_form,
    semi_kahler_components,
    verify_family_hitchin,
    verify_family_semi_para_kahler,
    verify_semi_kahler_system,
)
from .verify.report import render_markdown, show, show_matrix, to_json
from .verify.theorems import THEOREMS, anchor_for

__all__ = ["main", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_KINDS = {"complex": StructureKind.COMPLEX, "para": StructureKind.PARACOMPLEX}


class InputError(Exception):
    """Unreadable or malformed input; reported with exit code 2."""


# -- input loading -----------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def load_algebra_ref(ref: str) -> LieAlgebra:
    """``catalog:NAME`` (``⊕`` joins summands) or a path to an algebra file."""
    if ref.startswith("catalog:"):
        names = [n.strip() for n in ref[len("catalog:"):].split("⊕")]
        try:
            parts = [catalog(n) for n in names]
        except KeyError as exc:
            raise InputError(exc.args[0]) from None
        return parts[0] if len(parts) == 1 else direct_sum(*parts)
    try:
        return load_algebra(_read(ref))
    except AlgebraFormatError as exc:
        raise InputError(f"{ref}: {exc}") from None


def _load_form(path: str, dim: int | None, degree: int | None = None) -> AltForm:
    try:
        form = load_form(_read(path), dim)
    except FormFormatError as exc:
        raise InputError(f"{path}: {exc}") from None
    if degree is not None and form.degree != degree:
        raise InputError(f"{path}: expected a {degree}-form, got degree {form.degree}")
    return form


def _load_operator(path: str, dim: int | None):
    try:
        return load_endomorphism(_read(path), dim)
    except EndomorphismFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_metric(path: str, dim: int | None) -> Metric:
    try:
        return Metric(_load_operator(path, dim).matrix)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- document assembly ---------------------------------------------------------------


def _config(args: argparse.Namespace) -> dict:
    return {"seed": args.seed, "samples": args.samples, "monomial_cap": args.monomial_cap}


def _document(args: argparse.Namespace, inputs: dict, result: dict, passed: bool) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "anchor": anchor_for(args.command, "operations"),
        "config": _config(args),
        "inputs": inputs,
        "status": "pass" if passed else "fail",
        "result": result,
    }


def _md_value(v: Any, indent: str = "") -> list[str]:
    if isinstance(v, list) and v and all(isinstance(r, list) for r in v):
        return [""] + [indent + "    " + "  ".join(f"{x:>10}" for x in r) for r in v] + [""]
    if isinstance(v, dict):
        out = []
        for k, x in v.items():
            sub = _md_value(x, indent + "  ")
            if len(sub) == 1 and not isinstance(x, dict):
                out.append(f"{indent}- {k}: {sub[0].strip()}")
            else:
                out.append(f"{indent}- {k}:")
                out += sub
        return out or [f"{indent}(none)"]
    if isinstance(v, list):
        if not v:
            return ["(none)"]
        if all(not isinstance(x, (list, dict)) for x in v):
            return [", ".join(f"`{x}`" for x in v)]
        out = []
        for n, x in enumerate(v, 1):
            out.append(f"{indent}- [{n}]")
            out += _md_value(x, indent + "  ")
        return out
    return [f"`{v}`"]


def render_command_markdown(doc: dict) -> str:
    """Markdown view of a single-command document."""
    a = doc["anchor"] or {}
    out = [f"# {doc['command']}: {doc['status']}", ""]
    out.append(f"anchor `{a.get('anchor', '')}` ({a.get('provenance', '')})")
    out.append(f"schema {doc['schema_version']}; " + ", ".join(f"{k}={v}" for k, v in doc["config"].items()))
    out += ["", "## inputs", ""] + _md_value(doc["inputs"])
    out += ["", "## result", ""] + _md_value(doc["result"])
    return "\n".join(out).rstrip() + "\n"


def _emit(args: argparse.Namespace, doc: dict, markdown: str, stem: str) -> None:
    text = to_json(doc) if args.format == "structured" else markdown
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        suffix = ".json" if args.format == "structured" else ".md"
        (out / f"{stem}{suffix}").write_text(text, encoding="utf-8")


def _finish(args: argparse.Namespace, inputs: dict, result: dict, passed: bool) -> int:
    doc = _document(args, inputs, result, passed)
    _emit(args, doc, render_command_markdown(doc), args.command)
    return EXIT_OK if passed else EXIT_FAIL


def _form_str(form: AltForm) -> str:
    return str(form) if not form.is_zero else "0"


def _hitchin_result(h: HitchinResult) -> dict:
    out = {
        "K": show_matrix(h.K.matrix),
        "lambda": show(h.lam),
        "classification": h.classification.value,
        "volume_coefficient": show(h.volume),
    }
    out["normalized"] = show_matrix(h.normalized.matrix) if h.normalized is not None else None
    return out


# -- commands ------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    alg = load_algebra_ref(args.algebra)
    rep = validate_jacobi(alg)
    failures = [{"triple": [f.i, f.j, f.k], "component": f.t, "residual": show(f.residual)} for f in rep.failures]
    result = {"dimension": alg.dim, "jacobi": "pass" if rep.passed else "fail", "failures": failures}
    return _finish(args, {"algebra": args.algebra}, result, rep.passed)


def cmd_closed(args: argparse.Namespace) -> int:
    alg = load_algebra_ref(args.algebra)
    space = closed_2form_space(alg)
    generic = space.generic_w()
    result = {
        "dimension": space.dimension,
        "parameters": [space.names[t] for t in space.parameters],
        "basis": [_form_str(b) for b in space.basis],
        "generic": _form_str(generic),
        "determinant": show(det_2form(generic)),
    }
    return _finish(args, {"algebra": args.algebra}, result, True)


def cmd_symplectic(args: argparse.Namespace) -> int:
    alg = load_algebra_ref(args.algebra)
    v = symplectic_exists(alg)
    result = {
        "dimension": v.space.dimension,
        "generic": _form_str(v.space.generic_w()),
        "determinant": show(v.determinant),
        "verdict": "YES" if v.exists else "NO",
        "witness": _form_str(v.witness) if v.witness is not None else None,
    }
    if v.witness_values is not None:
        result["witness_values"] = {k: show(x) for k, x in v.witness_values.items()}
    return _finish(args, {"algebra": args.algebra}, result, True)


def cmd_semikahler(args: argparse.Namespace) -> int:
    alg = load_algebra_ref(args.algebra)
    inputs = {"algebra": args.algebra, "form": args.form}
    if args.form:
        omega = _load_form(args.form, alg.dim, 2)
        res = is_semi_kahler_form(alg, omega)
        result = {
            "d_omega": _form_str(res.differential),
            "omega_wedge_d_omega": _form_str(res.residual),
            "holds": res.holds,
        }
        return _finish(args, inputs, result, res.holds)
    comps = semi_kahler_components(alg, generic_two_form(alg.dim))
    result: dict = {"components": {"e" + "".join(map(str, k)): show(v) for k, v in comps.items()}}
    passed = True
    if args.check_printed:
        name = args.algebra[len("catalog:"):] if args.algebra.startswith("catalog:") else None
        if name not in ("G2", "G3", "G4"):
            raise InputError("--check-printed needs catalog:G2, catalog:G3 or catalog:G4")
        verdict = verify_semi_kahler_system(name)
        result["comparison"] = verdict.to_dict()
        passed = verdict.status is not Status.DISCREPANT
    return _finish(args, inputs, result, passed)


def cmd_nijenhuis(args: argparse.Namespace) -> int:
    alg = load_algebra_ref(args.algebra)
    kind = _KINDS[args.kind]
    J = _load_operator(args.operator, alg.dim)
    inputs = {"algebra": args.algebra, "operator": args.operator, "kind": args.kind, "form": args.form}
    N = nijenhuis(alg, J, kind)
    squares = is_zero(square_residual(J, kind))
    result: dict = {
        "squares_to_sign_identity": squares,
        "nonzero_components": {f"N({i},{j})^{k}": show(x) for (i, j, k), x in sorted(N.components.items())},
        "integrable": N.is_zero,
    }
    passed = N.is_zero
    if args.form:
        omega = _load_form(args.form, alg.dim, 2)
        rep = verify_kahler_triple(alg, omega, J, kind)
        result["triple"] = {
            "compatible": rep.compatible,
            "squares": rep.squares,
            "integrable": rep.integrable,
            "closed": rep.closed,
            "nondegenerate": rep.nondegenerate,
            "label": rep.label,
            "metric": show_matrix(rep.metric.matrix) if rep.metric is not None else None,
        }
        passed = rep.passed
    return _finish(args, inputs, result, passed)


def _volume(spec: str, dim: int) -> AltForm:
    if spec == "standard":
        return volume_form(dim)
    return _load_form(spec, dim, dim)


def cmd_hitchin(args: argparse.Namespace) -> int:
    inputs = {"algebra": args.algebra, "form": args.form, "from_2form": args.from_2form, "raw": args.raw,
              "volume": args.volume}
    if args.raw:
        if args.algebra:
            raise InputError("--raw takes no algebra")
        omega3 = _load_form(args.raw, 6, 3)
        h = hitchin_operator(omega3, _volume(args.volume, 6))
        return _finish(args, inputs, _hitchin_result(h), True)
    if not args.algebra:
        raise InputError("--form and --from-2form need an algebra")
    alg = load_algebra_ref(args.algebra)
    if alg.dim != 6:
        raise InputError("Hitchin's operator needs a six-dimensional algebra")
    if args.from_2form:
        if args.volume != "standard":
            raise InputError("--from-2form uses omega^omega^omega as volume; drop --volume")
        omega = _load_form(args.from_2form, 6, 2)
        if det_2form(omega) == 0:
            raise InputError(f"{args.from_2form}: 2-form is degenerate")
        h = classify_dω(alg, omega)
        result = {"d_omega": _form_str(ce_differential(alg, omega)), **_hitchin_result(h)}
        return _finish(args, inputs, result, True)
    form = _load_form(args.form, 6)
    if form.degree == 2:
        form = ce_differential(alg, form)
    elif form.degree != 3:
        raise InputError(f"{args.form}: expected a 2-form or a 3-form")
    h = hitchin_operator(form, _volume(args.volume, 6))
    return _finish(args, inputs, {"three_form": _form_str(form), **_hitchin_result(h)}, True)


def cmd_curvature(args: argparse.Namespace) -> int:
    alg = load_algebra_ref(args.algebra)
    inputs = {"algebra": args.algebra, "metric": args.metric, "form": args.form, "operator": args.operator,
              "kind": args.kind, "full": args.full}
    if args.metric:
        if args.form or args.operator:
            raise InputError("give either --metric or --form with --operator")
        g = _load_metric(args.metric, alg.dim)
    elif args.form and args.operator:
        omega = _load_form(args.form, alg.dim, 2)
        J = _load_operator(args.operator, alg.dim)
        try:
            g = associated_metric(omega, J)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        raise InputError("curvature needs --metric, or --form together with --operator")
    if g.determinant == 0:
        raise InputError("metric is degenerate")
    data = curvature(alg, g, full=args.full, monomial_cap=args.monomial_cap)
    lam = einstein_check(g, data.ricci)
    result = {
        "metric": show_matrix(g.matrix),
        "christoffel": {f"Gamma({i},{j})^{k}": show(x) for (i, j, k), x in sorted(data.connection.nonzero().items())},
        "ricci": show_matrix(data.ricci),
        "ricci_operator": show_matrix(data.ricci_operator),
        "scalar": show(data.scalar),
        "einstein_constant": show(lam) if lam is not None else None,
        "contraction": data.contraction,
    }
    if data.riemann is not None:
        result["riemann"] = {f"R({i},{j},{k})^{l}": show(x) for (i, j, k, l), x in sorted(data.riemann.nonzero().items())}
    return _finish(args, inputs, result, True)


def cmd_verify_family(args: argparse.Namespace) -> int:
    alg = load_algebra_ref(args.algebra)
    omega = _load_form(args.form, alg.dim, 2)
    P = _load_operator(args.operator, alg.dim)
    expected = None
    if args.expect_scalar is not None:
        try:
            expected = parse_scalar(args.expect_scalar, sorted(omega.parameters))
        except ScalarParseError as exc:
            raise InputError(f"--expect-scalar: {exc}") from None
    fam = Family.of(Path(args.form).stem, args.algebra, omega)
    verdicts = [verify_family_semi_para_kahler(
        alg, fam, P, expected_scalar=expected, samples=args.samples, seed=args.seed, monomial_cap=args.monomial_cap)]
    if args.hitchin:
        verdicts.append(verify_family_hitchin(alg, fam, expect=args.hitchin, seed=args.seed))
    inputs = {"algebra": args.algebra, "form": args.form, "operator": args.operator,
              "expect_scalar": args.expect_scalar, "hitchin": args.hitchin}
    result = {"verdicts": [v.to_dict() for v in verdicts]}
    passed = all(v.status is not Status.DISCREPANT for v in verdicts)
    return _finish(args, inputs, result, passed)


def cmd_paper(args: argparse.Namespace) -> int:
    selectors = list(THEOREMS) if args.theorem == "all" else [args.theorem]
    settings = Settings(samples=args.samples, monomial_cap=args.monomial_cap, seed=args.seed)
    allow = known_discrepancies()
    anchor = anchor_for("paper", "operations")
    reports = []
    for sel in selectors:
        doc = report_document(f"Theorem {sel} ({THEOREMS[sel]})", reproduce_theorem(sel, settings),
                              config=settings.as_dict(), allowlist=allow)
        reports.append({"schema_version": doc["schema_version"], "command": "paper", "theorem": sel,
                        "anchor": anchor, **{k: v for k, v in doc.items() if k != "schema_version"}})
    unexpected = [i for r in reports for i in r["summary"]["unexpected_discrepancies"]]
    bundle = {
        "schema_version": SCHEMA_VERSION,
        "command": "paper",
        "anchor": anchor,
        "config": settings.as_dict(),
        "status": "pass" if not unexpected else "fail",
        "unexpected_discrepancies": unexpected,
        "reports": reports,
    }
    markdown = "\n".join(f"anchor `{r['anchor']['anchor']}` ({r['anchor']['provenance']})\n\n" + render_markdown(r)
                         for r in reports)
    text = to_json(bundle) if args.format == "structured" else markdown
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for r in reports:
            stem = f"theorem-{r['theorem']}"
            if args.format == "structured":
                (out / f"{stem}.json").write_text(to_json(r), encoding="utf-8")
            else:
                (out / f"{stem}.md").write_text(
                    f"anchor `{r['anchor']['anchor']}` ({r['anchor']['provenance']})\n\n" + render_markdown(r),
                    encoding="utf-8")
    return EXIT_OK if not unexpected else EXIT_FAIL


# -- argument parsing ----------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    """Global flags, accepted before or after the command name."""
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("structured", "markdown"), default=argparse.SUPPRESS,
                   help="output format (default structured JSON)")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="index of the first sampled assignment")
    p.add_argument("--monomial-cap", type=int, default=argparse.SUPPRESS,
                   help="abandon exact curvature above this many monomials")
    p.add_argument("--samples", type=int, default=argparse.SUPPRESS, help="sample count for sampled fallbacks")
    p.add_argument("--out", default=argparse.SUPPRESS, help="also write the output into this directory")
    return p


def build_parser() -> argparse.ArgumentParser:
    # separate instances: parents share action objects, and set_defaults below must not leak
    common = _common()
    ap = argparse.ArgumentParser(prog="liegeom", parents=[_common()],
                                 description="Exact geometric structures on Lie algebras.")
    ap.set_defaults(format="structured", seed=0, monomial_cap=DEFAULT_MONOMIAL_CAP, samples=3, out=None)
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, func, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=func)
        return p

    alg_help = "catalog:NAME (catalog:A⊕B for a direct sum) or an algebra file"

    p = add("validate", cmd_validate, "check the Jacobi identity")
    p.add_argument("algebra", help=alg_help)

    p = add("closed", cmd_closed, "closed 2-forms and the determinant of the generic one")
    p.add_argument("algebra", help=alg_help)

    p = add("symplectic", cmd_symplectic, "decide whether a symplectic form exists")
    p.add_argument("algebra", help=alg_help)

    p = add("semikahler", cmd_semikahler, "omega ^ d omega for a given or generic 2-form")
    p.add_argument("algebra", help=alg_help)
    p.add_argument("--form", help="2-form file; omit for the generic 2-form")
    p.add_argument("--check-printed", action="store_true",
                   help="compare the generic system with the bundled reference system")

    p = add("nijenhuis", cmd_nijenhuis, "Nijenhuis tensor of an operator, optionally the full Kähler triple")
    p.add_argument("algebra", help=alg_help)
    p.add_argument("--operator", required=True, help="endomorphism file")
    p.add_argument("--kind", choices=tuple(_KINDS), default="complex")
    p.add_argument("--form", help="2-form file; checks the triple (omega, J, omega(., J .))")

    p = add("hitchin", cmd_hitchin, "Hitchin operator K of a 3-form")
    p.add_argument("algebra", nargs="?", help=alg_help)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--form", help="3-form file, or a 2-form file whose differential is used")
    src.add_argument("--from-2form", help="nondegenerate 2-form omega; uses d omega and volume omega^3")
    src.add_argument("--raw", help="3-form file on R^6, no algebra")
    p.add_argument("--volume", default="standard", help="'standard' (e1..6) or a 6-form file")

    p = add("curvature", cmd_curvature, "Levi-Civita connection, Ricci tensor and scalar curvature")
    p.add_argument("algebra", help=alg_help)
    p.add_argument("--metric", help="metric file (endomorphism format, symmetric rows)")
    p.add_argument("--form", help="2-form file, with --operator gives g = omega(., J .)")
    p.add_argument("--operator", help="endomorphism file")
    p.add_argument("--kind", choices=tuple(_KINDS), default="para", help="recorded only")
    p.add_argument("--full", action="store_true", help="also output the full curvature tensor")

    p = add("verify-family", cmd_verify_family, "verify a parametric semi-para-Kähler family")
    p.add_argument("algebra", help=alg_help)
    p.add_argument("--form", required=True, help="parametric 2-form file")
    p.add_argument("--operator", required=True, help="paracomplex structure P")
    p.add_argument("--expect-scalar", help="expected scalar curvature, in the form's parameters")
    p.add_argument("--hitchin", choices=("para", "degenerate"), help="also check the Hitchin type of d omega")

    p = add("paper", cmd_paper, "reproduce every verdict item of the selected theorem(s)")
    p.add_argument("--theorem", choices=(*THEOREMS, "all"), default="all")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"liegeom {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"liegeom {args.command}: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
