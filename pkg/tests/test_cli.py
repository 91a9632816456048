import json

import jsonschema
import pytest

from ssg.cli import main
from ssg.report import report_schema, validate_report, verify_paper

K33 = "ssg-bipartite 1\nparts 3 3\nedges 9\n" + "".join(f"{w} {u}\n" for w in range(3) for u in range(3))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_family_gamma9(capsys, tmp_path):
    out_path = tmp_path / "g.graph"
    code, _, _ = run(capsys, "family", "gamma9", "--out", str(out_path))
    lines = out_path.read_text().splitlines()
    assert code == 0
    assert lines[1:3] == ["parts 27 27", "edges 243"]


def test_family_sigma1(capsys):
    code, out, _ = run(capsys, "family", "sigma1:5")
    assert code == 0
    assert out.splitlines()[1:3] == ["parts 125 25", "edges 625"]


@pytest.mark.parametrize("token", ["sigma1:4", "bogus", "gamma2:9"])
def test_family_bad_token(capsys, token):
    code, _, err = run(capsys, "family", token)
    assert code == 2
    assert "error" in err
    if token == "sigma1:4":
        assert "p must be prime ≥ 5" in err


def test_family_output_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "family", "sigma3:5", "--out", str(a))
    run(capsys, "family", "sigma3:5", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_check_full(capsys):
    code, out, _ = run(capsys, "check", "gamma9", "--mode", "full")
    assert code == 0
    assert json.loads(out)["semisymmetric"] is True


def test_check_certificate(capsys):
    code, out, _ = run(capsys, "check", "gamma1:5", "--mode", "certificate")
    assert code == 0
    assert json.loads(out)["semisymmetric"] is True


def test_check_k33_file(capsys, tmp_path):
    path = tmp_path / "k33.graph"
    path.write_text(K33)
    code, out, _ = run(capsys, "check", str(path), "--mode", "full")
    assert code == 0
    assert json.loads(out)["semisymmetric"] is False


def test_check_undecided_exit_3(capsys, tmp_path):
    witness = tmp_path / "w.txt"
    witness.write_text("()\n")
    code, out, _ = run(capsys, "check", "gamma9", "--mode", "certificate", "--witness", str(witness))
    assert code == 3
    assert json.loads(out)["semisymmetric"] == "UNDECIDED"


def test_check_certificate_file_needs_witness(capsys, tmp_path):
    path = tmp_path / "k33.graph"
    path.write_text(K33)
    code, _, _ = run(capsys, "check", str(path), "--mode", "certificate")
    assert code == 2


def test_aut(capsys, tmp_path):
    assert run(capsys, "aut", "sigma3small")[1].startswith("order 1296\n")
    assert run(capsys, "aut", "gamma9")[1].startswith("order 13060694016\n")
    edge = tmp_path / "e.graph"
    edge.write_text("ssg-bipartite 1\nparts 1 1\nedges 1\n0 0\n")
    assert run(capsys, "aut", str(edge))[1].startswith("order 2\n")


def test_expand_quotient_iso(capsys, tmp_path):
    e = tmp_path / "e.graph"
    q = tmp_path / "q.graph"
    assert run(capsys, "expand", "sigma3small", "--p", "3", "--out", str(e))[0] == 0
    assert run(capsys, "iso", str(e), "gamma9")[:2] == (0, "true\n")
    assert run(capsys, "quotient", "gamma9", "--by", "u-twins", "--out", str(q))[0] == 0
    assert run(capsys, "iso", str(q), "sigma3small")[:2] == (0, "true\n")
    assert run(capsys, "iso", "sigma3small", "sigma6small")[:2] == (1, "false\n")


def test_malformed_graph_file(capsys, tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("not a graph\n")
    assert run(capsys, "aut", str(bad))[0] == 2


def test_verify_paper_usage(capsys):
    assert run(capsys, "verify-paper", "--p", "4")[0] == 2
    assert run(capsys, "verify-paper", "--p", "7")[0] == 2


@pytest.mark.parametrize("p", [3, 5])
def test_verify_paper_report(capsys, tmp_path, p):
    out = tmp_path / "r.json"
    code, _, err = run(capsys, "verify-paper", "--p", str(p), "--out", str(out))
    report = json.loads(out.read_text())
    assert code == 0, err
    assert report["verdict"] == "PASS"
    assert report["claims"] and all(c["passed"] for c in report["claims"])
    validate_report(report)
    ids = [c["id"] for c in report["claims"]]
    assert ids == sorted(ids)


def test_report_is_reproducible():
    def strip(r):
        r = dict(r, generated_at=None)
        r["claims"] = [dict(c, elapsed_s=None) for c in r["claims"]]
        return r
    assert strip(verify_paper(3)) == strip(verify_paper(3))


def test_report_big_integers_are_strings():
    report = verify_paper(3)
    claim = next(c for c in report["claims"] if c["id"] == "p3.gamma9.kernel-order")
    assert claim["computed"] == "10077696"
    bad = dict(report, claims=[dict(claim, computed=10077696)])
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, report_schema())
