import json
import subprocess
import sys

import pytest

from maxcurves.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def checks_by_id(text):
    return {c["id"]: c for c in json.loads(text)["checks"]}


def test_count(capsys):
    code, out, _ = run(capsys, "--p", "2", "--h", "1", "--n", "3", "count")
    assert code == 0
    c = checks_by_id(out)
    assert c["Cn.count"]["actual"] == 225 and c["Cn.maximal"]["status"] == "pass"
    for args, value in ((("--p", "3"), 6076), (("--n", "5"), 3969)):
        code, out, _ = run(capsys, *args, "count")
        assert code == 0 and checks_by_id(out)["Cn.count"]["actual"] == value


def test_group(capsys):
    code, out, _ = run(capsys, "--p", "3", "group")
    assert code == 0
    c = checks_by_id(out)
    assert c["Q.order"]["actual"] == 27 and c["Q.center_order"]["actual"] == 3
    assert c["Gamma.order"]["actual"] == 1512
    assert c["Gamma.center_order"]["actual"] == 7 and c["Gamma.center_is_M"]["actual"] is True
    code, out, _ = run(capsys, "group")
    c = checks_by_id(out)
    assert code == 0 and c["Q.exponent"]["actual"] == 4
    assert c["Gamma.center_is_M"] == {"id": "Gamma.center_is_M", "status": "info", "actual": False}
    code, out, _ = run(capsys, "--n", "5", "group")
    c = checks_by_id(out)
    assert (c["Sigma.order"]["actual"], c["M.order"]["actual"], c["N.order"]["actual"]) == (33, 11, 33)


def test_orbits(capsys):
    code, out, _ = run(capsys, "orbits")
    assert code == 0
    assert checks_by_id(out)["Gamma.orbit_sizes"]["actual"] == [1, 8, 72, 72, 72]


def test_ramification(capsys):
    code, out, _ = run(capsys, "--n", "5", "ramification")
    assert code == 0
    c = checks_by_id(out)
    assert c["Cn/P1z.lower_jumps"]["actual"] == [11, 33]
    assert c["Cn/P1z.upper_jumps"]["actual"] == ["11", "33/2"]
    assert c["Cn/P1z.rh_ok"]["status"] == "pass"
    assert c["lifting.lifts_possible"]["actual"] is False
    code, out, _ = run(capsys, "ramification")
    assert checks_by_id(out)["lifting.lifts_possible"]["actual"] is True


def test_expand(capsys):
    code, out, _ = run(capsys, "--precision", "48", "expand")
    assert code == 0
    c = checks_by_id(out)
    assert c["y.leading_exponent"]["actual"] == 3 and c["x.leading_exponent"]["actual"] == 9
    code, _, err = run(capsys, "--precision", "5", "expand")
    assert code == 2 and "PrecisionTooLow" in err


def test_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "--format", "csv", "count")
    assert code == 0 and out.splitlines()[0] == "id,status,actual,expected"
    code, out, _ = run(capsys, "--format", "text", "count")
    assert code == 0 and out.strip().endswith("OK")
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "--out", str(path), "count")
    assert code == 0 and out == "" and json.loads(path.read_text())["ok"]


def test_reports_are_byte_stable(capsys):
    outs = []
    for _ in range(2):
        run(capsys, "ramification")
        code, out, _ = run(capsys, "--p", "3", "group")
        outs.append(out)
    assert outs[0] == outs[1]


def test_usage_errors(capsys):
    assert run(capsys, "--n", "4", "count")[0] == 2
    assert run(capsys, "--p", "4", "count")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2


def test_check_failure_exit_code(capsys, monkeypatch):
    import maxcurves.cli as cli

    monkeypatch.setattr(cli, "expected_count", lambda c, params, field_order=None: -1)
    code, _, err = run(capsys, "count")
    assert code == 1 and "Cn.count" in err


def test_verify_all(tmp_path):
    path = tmp_path / "all.json"
    proc = subprocess.run(
        [sys.executable, "-m", "maxcurves.cli", "--out", str(path), "verify-all"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    rep = json.loads(path.read_text())
    assert rep["ok"] and all("seconds" in c for c in rep["checks"])
    suites = {c["id"].split(".")[0] for c in rep["checks"]}
    assert suites == {"field", "count", "group", "orbits", "ramification", "expand", "grouptheory"}
