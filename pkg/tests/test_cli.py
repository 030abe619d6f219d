import json

from nonshannon.cli import main
from nonshannon.derivation import ZHANG_YEUNG
from nonshannon.entropy_space import dump_forms, load_forms
from nonshannon.lp import Certificate, check_certificate
from nonshannon.shannon import Cone, shannon_cone


def test_gen_cone(tmp_path):
    out = tmp_path / "h3.jsonl"
    assert main(["gen-cone", "--n", "3", "--out", str(out)]) == 0
    assert load_forms(out.read_text()) == list(shannon_cone(3).ineqs)
    (tmp_path / "zy.jsonl").write_text(dump_forms([ZHANG_YEUNG]))
    out4 = tmp_path / "h4zy.jsonl"
    assert main(["gen-cone", "--n", "4", "--adjoin", str(tmp_path / "zy.jsonl"), "--substituted", "--out", str(out4)]) == 0
    assert len(load_forms(out4.read_text())) == 28 + 12


def test_verify(tmp_path, capsys):
    (tmp_path / "h4.jsonl").write_text(shannon_cone(4).dumps())
    (tmp_path / "zy.jsonl").write_text(dump_forms([ZHANG_YEUNG]))
    (tmp_path / "el.jsonl").write_text(dump_forms([shannon_cone(4).ineqs[3]]))
    assert main(["verify", "--cone", str(tmp_path / "h4.jsonl"), "--target", str(tmp_path / "zy.jsonl"),
                 "--emit-witness", str(tmp_path / "w.jsonl")]) == 1
    assert (tmp_path / "w.jsonl").exists()
    cert_path = tmp_path / "c.json"
    assert main(["verify", "--cone", str(tmp_path / "h4.jsonl"), "--target", str(tmp_path / "el.jsonl"),
                 "--emit-certificate", str(cert_path)]) == 0
    cert = Certificate.from_record(json.loads(cert_path.read_text()))
    assert check_certificate(shannon_cone(4), cert)
    assert "not implied" in capsys.readouterr().out


def test_project(tmp_path):
    (tmp_path / "h4.jsonl").write_text(shannon_cone(4).dumps())
    for method in ("chm", "fm"):
        out = tmp_path / f"p_{method}.jsonl"
        assert main(["project", "--cone", str(tmp_path / "h4.jsonl"), "--keep-vars", "1,2,3",
                     "--method", method, "--out", str(out)]) == 0
        assert set(load_forms(out.read_text())) == set(shannon_cone(3).ineqs)


def test_derive_and_iterate(tmp_path, capsys):
    scen = tmp_path / "s.json"
    scen.write_text(json.dumps({"m": 4, "steps": [{"k": 3, "I": [1, 2], "J": [4]}], "substituted": True}))
    rep = tmp_path / "rep"
    assert main(["derive", "--scenario", str(scen), "--report", str(rep), "--witnesses"]) == 0
    summary = json.loads((rep / "summary.json").read_text())
    assert summary["raw_facets"] == 31 and summary["new_classes"] == 1
    cone = Cone.from_forms(5, load_forms((rep / "cone.jsonl").read_text()))
    for line in (rep / "certificates.jsonl").read_text().splitlines():
        assert check_certificate(cone, Certificate.from_record(json.loads(line)["certificate"]))
    assert main(["iterate", "--scenario", str(scen), "--steps", "1", "--out", str(tmp_path / "it")]) == 0
    assert "projection 31 facets" in capsys.readouterr().out
    assert len(load_forms((tmp_path / "it" / "step1" / "bound.jsonl").read_text())) == 40


def test_sequence(tmp_path, capsys):
    out = tmp_path / "s3.jsonl"
    assert main(["sequence", "--s", "3", "--verify", "--emit", str(out)]) == 0
    assert "certified" in capsys.readouterr().out
    assert len(load_forms(out.read_text())) == 1


def test_bad_input(tmp_path, capsys):
    (tmp_path / "bad.jsonl").write_text('{"n": 2, "rel": "ge", "coeffs": {"1,5": "1"}}\n')
    assert main(["verify", "--cone", str(tmp_path / "bad.jsonl"), "--target", str(tmp_path / "bad.jsonl")]) == 2
    assert "error" in capsys.readouterr().err
