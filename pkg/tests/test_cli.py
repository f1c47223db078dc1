"""CLI contract: exit codes, determinism, config round-trip, output formats."""
import json

import numpy as np
import pytest

from vpl import cli


def run(args):
    return cli.main(args)


def test_resonance_exit_ok(capsys):
    assert run(["resonance"]) == 0
    out = capsys.readouterr().out
    assert "2.938535" in out


def test_resonance_json(capsys):
    assert run(["resonance", "--json", "--kernel", "paper"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["variant"] == "paper"
    assert doc["nu0"] == pytest.approx(3.469361118, abs=1e-8)


def test_design_json_fields(capsys):
    assert run(["design", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["energy_opt"] == pytest.approx(2.381e-6, rel=1e-3)
    assert doc["nu_at_intensity_opt"] == pytest.approx(np.pi, rel=1e-12)
    assert doc["config"]["n2"] == 3.5e-20


def test_design_length_scaling(capsys):
    assert run(["design", "--json"]) == 0
    base = json.loads(capsys.readouterr().out)
    cfg = {"length": 200.0}
    assert run(["design", "--json", "--config", _write(cfg)]) == 0
    doubled = json.loads(capsys.readouterr().out)
    assert doubled["intensity_opt"] == pytest.approx(base["intensity_opt"] / 2.0)
    assert doubled["energy_opt"] == pytest.approx(base["energy_opt"])


_tmpdir = None


def _write(cfg, name="cfg.json"):
    path = _tmpdir / name
    path.write_text(json.dumps(cfg))
    return str(path)


@pytest.fixture(autouse=True)
def _set_tmpdir(tmp_path):
    global _tmpdir
    _tmpdir = tmp_path
    yield


def test_even_grid_rejected_with_validation_exit(capsys):
    assert run(["spectrum", "--grid-points", "10"]) == 1
    assert "grid_points" in capsys.readouterr().err


def test_bad_config_values_exit_one(capsys):
    assert run(["spectrum", "--config", _write({"n2": -1.0})]) == 1
    assert run(["spectrum", "--config", _write({"mystery": 3})]) == 1
    assert "unknown config fields" in capsys.readouterr().err
    bad = _tmpdir / "broken.json"
    bad.write_text("{not json")
    assert run(["spectrum", "--config", str(bad)]) == 1
    assert run(["spectrum", "--config", str(_tmpdir / "missing.json")]) == 1


def test_spectrum_writes_deterministic_csv(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["spectrum", "--nu", "0.25", "--grid-points", "401"]
    assert run(args + ["--output", str(out1)]) == 0
    assert run(args + ["--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    header = out1.read_text().splitlines()[0]
    assert header == "x,rate_weak,rate_full,enhancement"


def test_spectrum_default_drive_has_flat_enhancement(tmp_path):
    out = tmp_path / "weak.csv"
    assert run(["spectrum", "--grid-points", "401", "--output", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    enhancement = np.array([float(r[3]) for r in rows])
    assert np.abs(enhancement - 1.0).max() <= 1e-3


def test_spectrum_saturation_flag_at_resonance(tmp_path, capsys):
    from vpl.kernel import response_r
    nu_sat = float(1.0 / np.sqrt(response_r(1.0, "pv").real))
    out = tmp_path / "sat.csv"
    assert run(["spectrum", "--nu", f"{nu_sat!r}", "--grid-points", "401",
                "--output", str(out)]) == 0
    assert "resonance saturation" in capsys.readouterr().err


def test_spectrum_json_round_trip(tmp_path, capsys):
    out = tmp_path / "run.json"
    assert run(["spectrum", "--nu", "0.4", "--grid-points", "401",
                "--format", "json", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["columns"] == ["x", "rate_weak", "rate_full", "enhancement"]
    # feed the emitted document back in as the config
    again = tmp_path / "again.json"
    assert run(["spectrum", "--config", str(out), "--format", "json",
                "--output", str(again)]) == 0
    doc2 = json.loads(again.read_text())
    assert doc2["rows"] == doc["rows"]
    assert doc2["config"] == doc["config"]


def test_flags_override_config(tmp_path, capsys):
    cfg = _write({"nu": 0.1, "kernel": "pv"})
    assert run(["resonance", "--config", cfg, "--kernel", "paper", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["variant"] == "paper"
    assert doc["config"]["nu"] == 0.1


def test_sweep_csv_and_argmax(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert run(["sweep", "--param", "nu", "--start", "0.5", "--stop", "5",
                "--count", "10", "--grid-points", "401",
                "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "nu,total_photons,pair_yield,peak_frequency,fwhm"
    assert len(lines) == 11
    err = capsys.readouterr().err
    assert "max total_photons at" in err
    assert "nu=3.00000000e+00" in err


def test_sweep_validation_exit_codes(capsys):
    assert run(["sweep", "--param", "nu", "--start", "1", "--stop", "2",
                "--count", "0"]) == 1
    assert run(["sweep", "--param", "nu", "--start", "1", "--stop", "2",
                "--count", "2", "--param2", "length"]) == 1
    assert run(["sweep", "--param", "waist", "--start", "1", "--stop", "2",
                "--count", "2"]) == 1


def test_verify_passes_on_default_kernel(capsys):
    assert run(["verify", "--oracle-modes", "32"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] resonance_value" in out
    assert "discrepancy ledger" in out
    assert "0.01" in out            # quoted drive estimate printed
    assert "factor 2" in out        # printed-coefficient gap reported


def test_verify_fails_on_paper_kernel(capsys):
    assert run(["verify", "--kernel", "paper", "--oracle-modes", "32"]) == 3
    out = capsys.readouterr().out
    assert "[FAIL] resonance_value" in out


def test_verify_reports_both_resonances(capsys):
    assert run(["verify", "--oracle-modes", "32"]) == 0
    out = capsys.readouterr().out
    assert "2.9385" in out and "3.4694" in out


def test_invalid_thread_env(tmp_path, monkeypatch):
    monkeypatch.setenv("VPL_THREADS", "many")
    assert run(["sweep", "--param", "nu", "--start", "0.1", "--stop", "0.2",
                "--count", "2", "--grid-points", "401",
                "--output", str(tmp_path / "s.csv")]) == 1
