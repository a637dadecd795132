import csv
import io
import json
import subprocess
import sys

import pytest

from robustcontam import cli, numerics


def _run(argv):
    return cli.main([str(a) for a in argv])


def _read(path):
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    assert lines[-1].startswith("# manifest ")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[:-1]))))
    return text, rows, lines[-1]


def test_bias_table_csv(tmp_path):
    out = tmp_path / "t.csv"
    assert _run(["bias-table", "--preset", "dgp3,dgp4", "--n", "50", "--reps", "100",
                 "--seed", "7", "--out", out]) == 0
    text, rows, manifest = _read(out)
    assert "\r" not in text
    assert len(rows) == 2 * 5
    assert rows[0].keys() == {"estimator", "preset", "n", "reps", "scale", "trim", "bias",
                              "abs_bias", "mc_se"}
    assert {r["estimator"] for r in rows} == {"mean", "median", "huber", "tukey", "lts"}
    for r in rows:
        assert float(r["abs_bias"]) == abs(float(r["bias"]))
        assert float(r["mc_se"]) > 0
    assert "command=bias-table" in manifest and "base_seed=7" in manifest
    assert "repetitions=100" in manifest
    side = json.loads((tmp_path / "t.csv.manifest.json").read_text())
    assert side["wall_time_seconds"] >= 0 and side["base_seed"] == 7


def test_bias_table_estimated_modes(tmp_path):
    out = tmp_path / "t.csv"
    assert _run(["bias-table", "--preset", "dgp4", "--n", "100", "--reps", "100",
                 "--scale", "mad", "--trim", "auto", "--out", out]) == 0
    _, rows, _ = _read(out)
    assert all(r["scale"] == "mad" and r["trim"] == "auto" for r in rows)


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small run\npreset = dgp1\nn = 30\nreps = 100  # quick\nseed = 3\n")
    out = tmp_path / "a.csv"
    assert _run(["bias-table", "--config", cfg, "--out", out]) == 0
    _, rows, manifest = _read(out)
    assert {r["preset"] for r in rows} == {"dgp1"} and "base_seed=3" in manifest
    out2 = tmp_path / "b.csv"
    assert _run(["bias-table", "--config", cfg, "--seed", "4", "--n", "40", "--out", out2]) == 0
    _, rows, manifest = _read(out2)
    assert {r["n"] for r in rows} == {"40"} and "base_seed=4" in manifest


def test_bad_config_key_is_usage_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = red\n")
    with pytest.raises(SystemExit) as info:
        _run(["bias-table", "--config", cfg])
    assert info.value.code == 2


@pytest.mark.parametrize("argv", [
    ["bias-table", "--scale", "sd"],
    ["bias-table", "--preset", "dgp9"],
    ["scale-sweep", "--sigma-factor-grid", "a,b"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        _run(argv)
    assert info.value.code == 2


def test_runtime_usage_errors(tmp_path, capsys):
    assert _run(["bias-table", "--preset", "dgp1", "--n", "30", "--reps", "10"]) == 2
    assert _run(["scale-sweep", "--lambda", "0.4", "--n", "50", "--reps", "10"]) == 2
    assert _run(["scale-sweep", "--n", "50", "--reps", "10", "--sigma-factor-grid", "0,1"]) == 2
    assert _run(["theory-report", "--out", tmp_path / "missing" / "x.csv"]) == 2
    assert "cannot write" in capsys.readouterr().err


def test_scale_sweep_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert _run(["scale-sweep", "--lambda", "0.6", "--n", "200", "--reps", "40",
                 "--sigma-factor-grid", "0.3,1.0", "--out", out]) == 0
    _, rows, _ = _read(out)
    assert len(rows) == 2 * 4 + 1
    red = [r for r in rows if r["estimator"] == "red_line"]
    assert float(red[0]["varsigma"]) == pytest.approx(0.50138, abs=1e-4)


def test_theory_report_rows(tmp_path):
    out = tmp_path / "th.csv"
    assert _run(["theory-report", "--rho", "tukey", "--lambda", "1", "--varrho", "0",
                 "--sigma-factor-grid", "1,1e6", "--out", out]) == 0
    _, rows, _ = _read(out)
    val = {(r["quantity"], r["family"], r["varsigma"]): r for r in rows}
    assert float(val[("consistency_factor_iqr", "", "")]["value"]) == pytest.approx(1, abs=1e-8)
    assert float(val[("consistency_factor_mad", "", "")]["value"]) == pytest.approx(1, abs=1e-8)
    assert float(val[("calibrated_c", "huber", "")]["value"]) == pytest.approx(1.345, abs=0.005)
    assert float(val[("boundedness_threshold_lambda", "tukey", "1000000.0")]["value"]) == \
        pytest.approx(0.5, abs=1e-6)
    assert all(r["formula"] for r in rows)


def test_theory_report_regime_error_in_note(tmp_path):
    out = tmp_path / "th.csv"
    assert _run(["theory-report", "--rho", "huber", "--lambda", "0.7", "--out", out]) == 0
    _, rows, _ = _read(out)
    iqr = next(r for r in rows if r["quantity"] == "consistency_factor_iqr")
    assert iqr["value"] == "nan" and iqr["note"].startswith("RegimeError")
    thr = next(r for r in rows if r["quantity"] == "boundedness_threshold_lambda")
    assert thr["note"].startswith("UnsupportedOperation")


def test_verify_passes(tmp_path):
    out = tmp_path / "v.csv"
    assert _run(["verify", "--mc-draws", "200000", "--out", out]) == 0
    _, rows, _ = _read(out)
    assert rows and all(r["status"] == "pass" for r in rows)
    assert {"lts_window_scan_vs_subset_search", "quantile_cdf_roundtrip_normal",
            "rho_tilde_quadrature_vs_monte_carlo"} <= {r["check"] for r in rows}


def test_verify_detects_tampered_quantile_constant(tmp_path, monkeypatch):
    tampered = (numerics._A[0] * 1.01,) + tuple(numerics._A[1:])
    monkeypatch.setattr(numerics, "_A", tampered)
    out = tmp_path / "v.csv"
    assert _run(["verify", "--mc-draws", "200000", "--out", out]) == 1
    _, rows, _ = _read(out)
    status = {r["check"]: r["status"] for r in rows}
    assert status["quantile_cdf_roundtrip_normal"] == "FAIL"


def test_byte_identical_across_worker_counts(tmp_path):
    args = ["bias-table", "--preset", "dgp4,dgp5", "--n", "60", "--reps", "150", "--seed", "11"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _run(args + ["--workers", "1", "--out", a]) == 0
    assert _run(args + ["--workers", "2", "--out", b]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point(tmp_path):
    out = tmp_path / "th.csv"
    proc = subprocess.run([sys.executable, "-m", "robustcontam", "theory-report",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().splitlines()[0].startswith("quantity,")
