import json

import pytest

from lagrange4.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gauss_json(capsys):
    code, out, _ = run(capsys, "expsum", "gauss", "--q", "4", "--m", "1", "--n", "0")
    assert code == 0
    env = json.loads(out)
    assert env["schema"] == 1 and env["command"] == "expsum gauss"
    assert env["results"]["closed"]["re"] == pytest.approx(2.0)
    assert all(c["passed"] for c in env["checks"])


def test_kloosterman_and_bound(capsys):
    code, out, _ = run(capsys, "expsum", "kloosterman", "--q", "5", "--m", "1", "--n", "1")
    env = json.loads(out)
    assert code == 0
    assert env["results"]["weil_bound"] == pytest.approx(2 * 5**0.5)


def test_density_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "density", "--N", "1", "--d", "1,3,15")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",") == ["d", "L", "alpha", "psi"]
    assert lines[2].startswith("3,8,9/8,")


def test_density_table(capsys):
    code, out, _ = run(capsys, "density", "--N", "1000003", "--p-max", "200")
    assert code == 0
    assert len(json.loads(out)["results"]) == 45


@pytest.mark.parametrize(
    "argv",
    [
        ["density", "--N", "4", "--d", "3"],
        ["density", "--N", "5", "--d", "9"],
        ["expsum", "charsum", "--p", "9", "--coeffs", "1,0,1"],
        ["report", "--N", "1000", "--d", "1"],
        ["expsum", "vq", "--q", "5", "--N", "4"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "lgr4: error" in err


def test_report_with_cache_and_out(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "--out", str(out_file), "report", "--N", "100003", "--d", "1,3", "--cache", str(tmp_path))
    assert code == 0
    env = json.loads(out)
    assert json.loads(out_file.read_text()) == env
    assert [r["d"] for r in env["results"]] == [1, 3]
    assert (tmp_path / "lgr4_100003.bin").exists()


def test_verify_quick_suites(capsys):
    for suite in ("sieve", "jacobi"):
        code, out, _ = run(capsys, "verify", suite, "--quick", "--n-max", "2000")
        assert code == 0, out
        assert json.loads(out)["command"] == f"verify {suite}"


def test_verify_endtoend(capsys):
    code, out, _ = run(capsys, "verify", "endtoend")
    assert code == 0
    assert json.loads(out)["checks"]


def test_failed_check_exit_code(monkeypatch, capsys):
    from lagrange4 import verify

    monkeypatch.setattr(verify, "check_sieve", lambda p0=7: [verify.Check("forced", False, 1.0, 0.0)])
    code, _, _ = run(capsys, "verify", "sieve")
    assert code == 1
