import json

import pytest

from designswitch.cli import main
from designswitch.design import format_incidence


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io

        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_builtin_fano(capsys):
    code, out, _ = run(capsys, "validate", "fano.inc")
    assert code == 0
    assert "2-(7,3,1)" in out


def test_validate_failure(tmp_path, capsys):
    f = tmp_path / "bad.inc"
    f.write_text("3 2\n110\n011\n")
    code, _, err = run(capsys, "validate", str(f))
    assert code == 1 and err.startswith("error:")


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["hadamard", "search"])
    assert exc.value.code == 2


def test_golden_missing_fixture(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("DESIGNSWITCH_FIXTURES", raising=False)
    code, _, err = run(capsys, "classify", "--golden", "ex3.4", "--fixtures", str(tmp_path))
    assert code == 3 and "missing" in err


def test_orbit_switch_then_equiv(capsys, monkeypatch):
    code, out, _ = run(capsys, "orbit", "switch", "M1.om", "--rows", "0,9")
    assert code == 0
    code, eq, _ = run(capsys, "orbit", "equiv", "-", "M2.om", stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and eq.startswith("equivalent")
    code, neq, _ = run(capsys, "orbit", "equiv", "M1.om", "M2.om")
    assert code == 1 and "not equivalent" in neq


def test_orbit_validate_and_candidates(capsys):
    code, out, _ = run(capsys, "orbit", "validate", "M3p.om")
    assert code == 0
    code, out, _ = run(capsys, "orbit", "switch", "M3.om", "--candidates", "8")
    assert code == 0 and len(out.strip().splitlines()) == 2


def test_switch_pair_and_certify(tmp_path, capsys, fano):
    f = tmp_path / "fano.inc"
    f.write_text(format_incidence(fano))
    code, switched, _ = run(capsys, "switch", str(f), "--blocks", "0,1")
    assert code == 0
    g = tmp_path / "sw.inc"
    g.write_text(switched)
    _, c1, _ = run(capsys, "certify", str(f))
    _, c2, _ = run(capsys, "certify", str(g))
    assert c1.split()[0] == c2.split()[0]
    code, _, _ = run(capsys, "--seed", "3", "certify", str(f), "--relabel", "5")
    assert code == 0


def test_rank_and_aut(capsys):
    code, out, _ = run(capsys, "rank", "fano.inc", "-p", "2,3")
    assert code == 0 and "4" in out and "6" in out
    code, out, _ = run(capsys, "aut", "fano.inc")
    assert code == 0 and "168" in out


def test_bush_pipeline(tmp_path, capsys):
    code, had, _ = run(capsys, "bush", "search", "-n", "2", "--symmetry", "negacyclic", "--limit", "1")
    assert code == 0 and had.splitlines()[0] == "16"
    h = tmp_path / "h.had"
    h.write_text(had)
    code, out, _ = run(capsys, "hadamard", "check", str(h), "-n", "2")
    assert code == 0
    code, menon, _ = run(capsys, "hadamard", "to-design", str(h))
    d = tmp_path / "m.inc"
    d.write_text(menon)
    code, out, _ = run(capsys, "closure", str(d), "--bush", "2")
    assert code == 0
    c = tmp_path / "c.inc"
    c.write_text(out)
    report = tmp_path / "r.json"
    code, text, _ = run(capsys, "classify", str(c), "-p", "2", "--jobs", "1", "--out", str(report))
    assert code == 0 and "isomorphism classes" in text
    data = json.loads(report.read_text())
    assert data["design_count"] == 16
