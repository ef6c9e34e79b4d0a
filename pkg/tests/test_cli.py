import csv
import io
import json

import pytest

from psitwist.cli import SCAN_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_s3s3(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--suite", "s3s3", "--out", str(out_file))
    assert code == 0
    assert "all checks passed" in out
    doc = json.loads(out_file.read_text())
    assert doc["passed"] is True
    assert doc["reports"][0]["case"] == "s3s3"
    assert "wall_time" not in doc["reports"][0]


def test_verify_reports_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "verify", "--suite", "s3s3", "--seed", "42", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_timing_and_csv(capsys, tmp_path):
    path = tmp_path / "r.json"
    run(capsys, "verify", "--suite", "s3s3", "--timing", "--out", str(path))
    assert "wall_time" in json.loads(path.read_text())["reports"][0]
    path = tmp_path / "r.csv"
    run(capsys, "verify", "--suite", "s3s3", "--format", "csv", "--out", str(path))
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert rows and set(rows[0]) == {"case", "check", "residual", "tolerance", "pass"}


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "s3s3", "--tol", "untwisted_nijenhuis_max=1e6")
    assert code == 1
    assert "FAIL" in out


def test_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "--suite", "bogus")
    assert code == 2
    assert "unknown suite" in err


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suite": "bogus"}))
    assert run(capsys, "verify", "--config", str(cfg))[0] == 2
    assert run(capsys, "verify", "--config", str(cfg), "--suite", "s3s3")[0] == 0
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert run(capsys, "verify", "--config", str(cfg))[0] == 2
    assert run(capsys, "verify", "--config", str(tmp_path / "missing.json"))[0] == 2


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--f", "x1*x2", "--c", "5", "--samples", "20")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "certificate" and doc["residual"] > 1e-4
    assert len(doc["point"]) == 7


def test_certify_inconclusive(capsys):
    code, out, _ = run(capsys, "certify", "--c", "5", "--samples", "1", "--tol", "1e6")
    assert code == 1
    assert json.loads(out)["status"] == "inconclusive"


def test_certify_degenerate(capsys):
    code, out, err = run(capsys, "certify", "--c", "1")
    assert code == 2 and out == ""
    doc = json.loads(err)
    assert doc["status"] == "degenerate" and len(doc["witness"]) == 7


def test_certify_parse_error(capsys):
    code, _, err = run(capsys, "certify", "--f", "x1*")
    assert code == 2
    assert "position 3" in err


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--c-range", "1:3:1", "--samples", "200")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == SCAN_COLUMNS
    assert [r["valid"] for r in rows] == ["false", "true", "true"]
    assert float(rows[1]["bound_max"]) == pytest.approx(4.0)


def test_scan_json(capsys, tmp_path):
    path = tmp_path / "scan.json"
    code, _, _ = run(capsys, "scan", "--c-range", "17.5:18:0.5", "--samples", "200", "--format", "json", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["bh_transition"] == [17.5, 18.0]


@pytest.mark.parametrize("argv", [["scan", "--c-range", "3:2:1"], ["scan"], ["verify", "--samples", "0"], ["frobnicate"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2
