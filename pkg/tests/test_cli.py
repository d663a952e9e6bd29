from __future__ import annotations

import json
import subprocess
import sys

import pytest

from liegeom.algebra import catalog, dump_algebra
from liegeom.cli import main
from liegeom.forms import ce_differential, dump_form
from liegeom.structures import dump_endomorphism
from liegeom.verify import Family, fixture, sample_family


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(path, doc) -> str:
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.fixture
def files(tmp_path):
    g1 = dump_algebra(catalog("G1"))
    corrupted = dict(g1)
    corrupted["brackets"] = [b if (b["i"], b["j"], b["k"]) != (2, 4, 2) else {**b, "k": 3} for b in g1["brackets"]]
    fam = Family.of("family10", "G2", fixture("G2.family10").value())
    return {
        "abelian": write(tmp_path / "abelian6.alg", {"dim": 6, "brackets": []}),
        "corrupted": write(tmp_path / "corrupted.alg", corrupted),
        "split": write(tmp_path / "e123_plus_e456.form", {"degree": 3, "terms": [
            {"indices": [1, 2, 3], "c": "1"}, {"indices": [4, 5, 6], "c": "1"}]}),
        "dOmega01": write(tmp_path / "dOmega01.form", dump_form(ce_differential(catalog("G2"), fixture("Omega01").value()))),
        "omega3": write(tmp_path / "omega3_sample.form", dump_form(sample_family(fam, 0).obj)),
        "family10": write(tmp_path / "family10.form", dump_form(fixture("G2.family10").value())),
        "Omega01": write(tmp_path / "Omega01.form", dump_form(fixture("Omega01").value())),
        "omega1": write(tmp_path / "omega1.form", dump_form(fixture("G1.omega1").value())),
        "J1": write(tmp_path / "J1.op", dump_endomorphism(fixture("G1.J1").value())),
        "g1": write(tmp_path / "g1.metric", dump_endomorphism(fixture("G1.g1").value())),
        "P0": write(tmp_path / "P0.op", dump_endomorphism(fixture("P0").value())),
        "degenerate": write(tmp_path / "degenerate.form", {"degree": 2, "terms": [{"indices": [1, 2], "c": "1"}]}),
        "broken": str(tmp_path / "broken.form"),
    }


def test_validate(capsys, files):
    code, out, _ = run(capsys, "validate", "catalog:G1")
    doc = json.loads(out)
    assert code == 0 and doc["result"]["jacobi"] == "pass"
    assert doc["schema_version"] == 1 and doc["anchor"]["anchor"]
    assert run(capsys, "validate", files["abelian"])[0] == 0
    code, out, _ = run(capsys, "validate", files["corrupted"])
    assert code == 1
    assert json.loads(out)["result"]["failures"][0]["triple"]


def test_parse_errors_exit_2(capsys, files, tmp_path):
    (tmp_path / "bad.alg").write_text('{"dim": 6, "brackets": [{"i": 1}]}')
    code, _, err = run(capsys, "validate", str(tmp_path / "bad.alg"))
    assert code == 2 and "brackets[0]" in err
    assert run(capsys, "validate", "catalog:G9")[0] == 2
    assert run(capsys, "validate", str(tmp_path / "missing.alg"))[0] == 2


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["validate", "catalog:G1", "--no-such-flag"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["paper", "--theorem", "3.7"])
    assert exc.value.code == 2


def test_symplectic(capsys):
    code, out, _ = run(capsys, "symplectic", "catalog:G1")
    r = json.loads(out)["result"]
    assert code == 0 and r["dimension"] == 5 and r["verdict"] == "YES"
    r = json.loads(run(capsys, "symplectic", "catalog:G4")[1])["result"]
    assert r["verdict"] == "NO" and r["determinant"] == "0"
    r = json.loads(run(capsys, "symplectic", "catalog:A3.1⊕A3.1")[1])["result"]
    assert r["verdict"] == "YES" and r["witness"]


def test_closed(capsys):
    r = json.loads(run(capsys, "closed", "catalog:G1")[1])["result"]
    assert r["dimension"] == 5 and len(r["basis"]) == 5


def test_hitchin_variants(capsys, files):
    code, out, _ = run(capsys, "hitchin", "--raw", files["split"], "--volume", "standard")
    assert code == 0 and json.loads(out)["result"]["lambda"] == "1"
    r = json.loads(run(capsys, "hitchin", "catalog:G2", "--form", files["dOmega01"])[1])["result"]
    assert r["classification"] == "degenerate"
    r = json.loads(run(capsys, "hitchin", "catalog:G2", "--from-2form", files["omega3"])[1])["result"]
    assert r["classification"] == "paraType" and r["normalized"]
    code, _, err = run(capsys, "hitchin", "catalog:G2", "--from-2form", files["degenerate"])
    assert code == 2 and "degenerate" in err


def test_semikahler(capsys, files):
    code, out, _ = run(capsys, "semikahler", "catalog:G2", "--form", files["Omega01"])
    assert code == 0 and json.loads(out)["result"]["holds"] is True
    code, out, _ = run(capsys, "semikahler", "catalog:G3", "--check-printed")
    assert code == 0 and json.loads(out)["result"]["comparison"]["status"] == "VERIFIED"


def test_nijenhuis_and_kahler_triple(capsys, files):
    code, out, _ = run(capsys, "nijenhuis", "catalog:G1", "--operator", files["J1"], "--form", files["omega1"])
    r = json.loads(out)["result"]
    assert code == 0 and r["integrable"] and r["triple"]["label"] == "Kähler"
    code, _, _ = run(capsys, "nijenhuis", "catalog:G2", "--operator", files["J1"])
    assert code == 1


def test_curvature(capsys, files):
    code, out, _ = run(capsys, "curvature", "catalog:G1", "--metric", files["g1"])
    r = json.loads(out)["result"]
    assert code == 0 and r["scalar"] == "12" and r["einstein_constant"] == "2"
    r = json.loads(run(capsys, "curvature", "catalog:G2", "--form", files["Omega01"], "--operator", files["P0"],
                       "--full")[1])["result"]
    assert r["scalar"] == "0" and r["riemann"]


def test_verify_family(capsys, files):
    code, out, _ = run(capsys, "verify-family", "catalog:G2", "--form", files["family10"], "--operator", files["P0"],
                       "--expect-scalar", "w34/(w15*w26)", "--hitchin", "para")
    doc = json.loads(out)
    assert code == 0 and [v["status"] for v in doc["result"]["verdicts"]] == ["VERIFIED", "VERIFIED"]
    code, _, _ = run(capsys, "verify-family", "catalog:G2", "--form", files["family10"], "--operator", files["P0"],
                     "--expect-scalar", "w34")
    assert code == 1


def test_markdown_and_out_dir(capsys, tmp_path):
    code, out, _ = run(capsys, "--format", "markdown", "--out", str(tmp_path / "o"), "validate", "catalog:G2")
    assert code == 0 and out.startswith("# validate: pass") and "anchor `" in out
    assert (tmp_path / "o" / "validate.md").read_text() == out
    # global flags are accepted after the command too
    code, out, _ = run(capsys, "validate", "catalog:G2", "--format", "markdown")
    assert out.startswith("# validate")


def test_paper_single_theorem(capsys, tmp_path):
    code, out, _ = run(capsys, "paper", "--theorem", "3.3", "--out", str(tmp_path))
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1 and doc["anchor"]["anchor"]
    assert [r["theorem"] for r in doc["reports"]] == ["3.3"]
    assert doc["reports"][0]["summary"]["counts"]["DISCREPANT"] == 0
    assert json.loads((tmp_path / "theorem-3.3.json").read_text())["items"] == doc["reports"][0]["items"]


def test_paper_is_deterministic(capsys):
    a = run(capsys, "paper", "--theorem", "3.3", "--seed", "2")[1]
    b = run(capsys, "paper", "--theorem", "3.3", "--seed", "2")[1]
    assert a == b and json.loads(a)["config"]["seed"] == 2


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "liegeom.cli", "validate", files["corrupted"]],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["command"] == "validate"
