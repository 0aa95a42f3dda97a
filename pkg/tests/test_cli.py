import csv
import hashlib
import json
import math

import pytest

from roughgaps import cli
from roughgaps.acceptance import CriterionResult


def run_cli(tmp_path, *argv):
    out = tmp_path / "out"
    code = cli.main(["--out-dir", str(out), *argv])
    return code, out


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_series_schema_and_precision(tmp_path):
    code, out = run_cli(tmp_path, "series", "--n-max", "200")
    assert code == 0
    rows = read_csv(out / "series.csv")
    assert list(rows[0].keys()) == ["N", "proportion", "proportion_times_logN"]
    assert len(rows) == 200
    prev_n = 0
    for row in rows:
        n = int(row["N"])
        assert n > prev_n
        prev_n = n
        p = float(row["proportion"])
        assert 0.0 <= p <= 1.0
        # proportions carry ten decimal places and the product recomputes
        assert len(row["proportion"].split(".")[1]) == 10
        assert float(row["proportion_times_logN"]) == pytest.approx(
            p * math.log(n), abs=1e-9)


def test_gaps_csv_schema(tmp_path):
    code, out = run_cli(tmp_path, "scan", "--lo", "2", "--hi", "200", "--gaps-csv")
    assert code == 0
    rows = read_csv(out / "gaps.csv")
    assert list(rows[0].keys()) == ["n", "p", "p_next", "gap_len", "contains_rough",
                                    "witness", "strict_contains"]
    for i, row in enumerate(rows, start=1):
        assert int(row["n"]) == i
        assert int(row["p_next"]) - int(row["p"]) == int(row["gap_len"])
        assert row["contains_rough"] in ("0", "1")
        assert row["strict_contains"] in ("0", "1")
        if row["contains_rough"] == "0":
            assert row["witness"] == ""
        else:
            assert int(row["p"]) < int(row["witness"]) < int(row["p_next"])
    report = json.loads((out / "scan_report.json").read_text())
    assert report["total_gaps"] == len(rows)


def test_omega_outputs(tmp_path):
    code, out = run_cli(tmp_path, "omega", "--h-max", "10")
    assert code == 0
    om = read_csv(out / "omega.csv")
    assert {(r["h"], r["residue"]) for r in om} == {
        ("4", "1"), ("6", "1"), ("6", "23"), ("8", "89"), ("8", "113"),
        ("10", "1"), ("10", "199")}
    ch = read_csv(out / "ch.csv")
    assert [r["h"] for r in ch] == ["4", "6", "8", "10"]
    assert float(ch[0]["c_h"]) == pytest.approx(1.3203236, abs=1e-6)


def test_manifest_hashes_outputs(tmp_path):
    code, out = run_cli(tmp_path, "series", "--n-max", "50")
    manifest = json.loads((out / "run.json").read_text())
    assert manifest["config"]["command"] == "series"
    assert manifest["config"]["n_max"] == 50
    assert len(manifest["config_digest"]) == 64
    for name, digest in manifest["outputs"].items():
        data = (out / name).read_bytes()
        assert hashlib.sha256(data).hexdigest() == digest
    assert "series.csv" in manifest["outputs"]


def test_reruns_are_byte_identical(tmp_path):
    _, out1 = run_cli(tmp_path / "a", "series", "--n-max", "500")
    _, out2 = run_cli(tmp_path / "b", "series", "--n-max", "500")
    assert (out1 / "series.csv").read_bytes() == (out2 / "series.csv").read_bytes()


def test_validation_exit_code(tmp_path):
    code, _ = run_cli(tmp_path, "scan", "--lo", "10", "--hi", "5")
    assert code == 2
    code, _ = run_cli(tmp_path, "series", "--n-max", "0")
    assert code == 2


def test_usage_error_exit_code(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--out-dir", str(tmp_path), "nonsense"])
    assert exc.value.code == 2


def test_constants_subcommand(tmp_path, capsys):
    code, out = run_cli(tmp_path, "constants", "--H", "100", "--z", "50")
    assert code == 0
    printed = capsys.readouterr().out
    assert "twin_prime_constant" in printed and "1.320323632" in printed
    data = json.loads((out / "constants.json").read_text())
    names = {d["name"] for d in data}
    assert "twin_prime_constant" in names and "exp_neg_gamma" in names
    assert all(d["radius"] >= 0 for d in data)


def test_singular_subcommand(tmp_path, capsys):
    code, out = run_cli(tmp_path, "singular", "0", "2")
    assert code == 0
    data = json.loads((out / "singular.json").read_text())
    assert data["value"] == pytest.approx(1.3203236316937392, abs=1e-9)
    assert data["inclusion_exclusion"] == pytest.approx(0.3203236, abs=1e-6)


def test_check_exit_code_on_failure(tmp_path, monkeypatch):
    fail = [CriterionResult(cid=1, name="stub", passed=False, detail="no", seconds=0.0)]
    monkeypatch.setattr(cli, "run_acceptance", lambda profile: fail)
    code, out = run_cli(tmp_path, "check")
    assert code == 3
    report = json.loads((out / "acceptance.json").read_text())
    assert report[0]["passed"] is False


def test_check_exit_code_on_success(tmp_path, monkeypatch):
    ok = [CriterionResult(cid=1, name="stub", passed=True, detail="yes", seconds=0.0)]
    monkeypatch.setattr(cli, "run_acceptance", lambda profile: ok)
    code, _ = run_cli(tmp_path, "check")
    assert code == 0
