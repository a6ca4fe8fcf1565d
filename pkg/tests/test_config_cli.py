import subprocess
import sys

import numpy as np
import pytest

from faraday_spin.cli import main
from faraday_spin.config import PRESETS, ConfigError, parse_config
from faraday_spin.estimator import read_record
from faraday_spin.model import REFERENCE_PARAMS, REFERENCE_PHOTONS, REFERENCE_TIME
from faraday_spin.sweeps import HEADERS, run_sweep

SMALL_ORACLE = """
preset = "paper"
[spin]
tau = 1.0
[oracle]
cutoff = 8
photons_per_mode = 0.5
coupling_halvings = 1
"""


def test_reference_numbers_pinned():
    assert (REFERENCE_PARAMS.lam, REFERENCE_PARAMS.omega_p, REFERENCE_PARAMS.omega_e) == (9.8e10, 2.47e15, 2.48e15)
    assert REFERENCE_TIME == 20e-12
    assert REFERENCE_PHOTONS == 5e5
    assert PRESETS["paper"]["probe"]["interaction_time_ps"] == pytest.approx(20.0, rel=1e-15)


def test_minimal_preset():
    cfg = parse_config('preset = "paper"\n')
    assert cfg.params == REFERENCE_PARAMS
    assert cfg.interaction_time == pytest.approx(REFERENCE_TIME, rel=1e-15)
    assert cfg.amps.mean_photons == pytest.approx(REFERENCE_PHOTONS, rel=1e-12)
    assert cfg.mix.tau == 1.0
    assert cfg.photon_grid.values()[[0, -1]] == pytest.approx([1e2, 1e10])
    assert len(cfg.photon_grid.values()) == 33


def test_full_document_without_preset():
    cfg = parse_config(
        """
seed = 3
[params]
lambda_rad_per_s = 1e11
omega_p_rad_per_s = 2.0e15
omega_e_rad_per_s = 2.01e15
[probe]
amplitude_l = 2.0
amplitude_r = 1.0
phase_l_rad = 1.0
interaction_time_ps = 5
[time_grid]
start_ps = 1
stop_ps = 2
steps = 3
[output]
path = "x.csv"
"""
    )
    assert cfg.params.lam == 1e11 and cfg.seed == 3
    assert (cfg.amps.n_L, cfg.amps.n_R, cfg.amps.theta_L, cfg.amps.theta_R) == (2.0, 1.0, 1.0, 0.0)
    assert cfg.time_grid.values() == pytest.approx([1e-12, 1.5e-12, 2e-12])
    assert cfg.output_path == "x.csv"


def test_preset_values_can_be_overridden():
    cfg = parse_config('preset = "paper"\n[params]\nlambda_rad_per_s = 5e10\n')
    assert cfg.params.lam == 5e10 and cfg.params.omega_p == REFERENCE_PARAMS.omega_p


@pytest.mark.parametrize(
    "text, pattern",
    [
        ('preset = "paper"\n[spin]\ntau = 1.5\n', r"spin\.tau.*line 3.*0 <= tau <= 1"),
        ('preset = "paper"\n[spin]\ntau = 0.5\ntau = 0.6\n', "malformed"),
        ('preset = "paper"\n[spin]\ntaux = 0.5\n', r"spin\.taux.*unknown key"),
        ('preset = "paper"\n[params]\nlambda_hz = 1e10\n', "unit suffix mismatch; expected 'lambda_rad_per_s'"),
        ('preset = "paper"\n[probe]\ninteraction_time_ns = 1\n', "expected 'interaction_time_ps'"),
        ('preset = "paper"\n[nope]\na = 1\n', "unknown section"),
        ('preset = "moon"\n', "unknown preset"),
        ("[params]\nlambda_rad_per_s = 1e10\n", "missing required key"),
        ('preset = "paper"\n[spin]\ntau = "half"\n', "expected float"),
        ('preset = "paper"\n[time_grid]\nstart_ps = 5\nstop_ps = 1\n', "start exceeds stop"),
        ('preset = "paper"\n[time_grid]\nsteps = 0\n', "at least one step"),
        ('preset = "paper"\n[tau_grid]\nstop = 2\n', r"\[0, 1\]"),
        ('preset = "paper"\n[photon_grid]\nmin = 0\n', "log-spaced"),
        ('preset = "paper"\n[probe]\namplitude_l = 1.0\n', "amplitude_r.*missing"),
        ('preset = "paper"\nseed = -1\n', "nonnegative"),
        ('preset = "paper"\n[estimate]\nshots = 1\n', "shots"),
        ('preset = "paper"\n[params]\nomega_e_rad_per_s = 2.47e15\n', "params"),
    ],
)
def test_config_errors(text, pattern):
    with pytest.raises(ConfigError, match=pattern):
        parse_config(text)


@pytest.mark.parametrize("kind, rows", [
    ("angle_vs_time_tau", 201 * 11),
    ("noise_vs_time_tau", 201 * 11),
    ("noise_vs_photons", 33 * 11),
])
def test_sweep_headers_and_row_counts(kind, rows):
    res = run_sweep(kind, parse_config('preset = "paper"\n'))
    lines = res.to_csv().splitlines()
    assert lines[0] == ",".join(HEADERS[kind])
    assert len(lines) == rows + 1


def test_golden_headers():
    assert HEADERS["angle_vs_time_tau"] == ("time_s", "tau", "theta_rad", "theta_mrad")
    assert HEADERS["noise_vs_photons"] == ("n_photons", "tau", "delta_theta_rad", "shot_term_rad", "intrinsic_term_rad")
    assert HEADERS["oracle_check"] == (
        "alpha", "theta_exact_rad", "theta_analytic_rad", "rel_err",
        "fluct_exact_rad", "fluct_analytic_rad", "heisenberg_residual",
    )
    assert HEADERS["estimate"] == ("tau_true", "tau_est_low", "tau_est_high", "tau_selected", "bootstrap_se")


def test_angle_sweep_mirror_and_extremum():
    cfg = parse_config('preset = "paper"\n[tau_grid]\nsteps = 2\n')
    rows = run_sweep("angle_vs_time_tau", cfg).rows
    down = np.array([r[2] for r in rows if r[1] == 0.0])
    up = np.array([r[2] for r in rows if r[1] == 1.0])
    assert np.array_equal(up, -down)
    i = int(np.argmax(np.abs(up)))
    assert abs(up[i]) == pytest.approx(1.93e-2, rel=2e-3)
    assert rows[2 * i][0] == pytest.approx(20e-12, rel=0.05)


def test_noise_sweep_saturation():
    cfg = parse_config('preset = "paper"\n[tau_grid]\nstart = 0.5\nstop = 1.0\nsteps = 2\n')
    rows = run_sweep("noise_vs_photons", cfg).rows
    mixed = [r for r in rows if r[1] == 0.5]
    assert mixed[-1][2] == pytest.approx(1.929e-2, rel=1e-3)


def test_estimate_sweep_is_deterministic_and_thread_independent(monkeypatch):
    text = 'preset = "paper"\nseed = 4\n[tau_grid]\nstart = 0.1\nstop = 0.9\nsteps = 3\n[estimate]\nshots = 2000\nbootstrap = 50\n'
    monkeypatch.setenv("FARADAY_SPIN_THREADS", "1")
    serial = run_sweep("estimate", parse_config(text)).to_csv()
    monkeypatch.setenv("FARADAY_SPIN_THREADS", "3")
    parallel = run_sweep("estimate", parse_config(text)).to_csv()
    assert serial == parallel
    assert len(serial.splitlines()) == 4


def test_oracle_sweep_small():
    res = run_sweep("oracle_check", parse_config(SMALL_ORACLE))
    assert len(res.rows) == 2
    assert res.rows[1][0] == pytest.approx(res.rows[0][0] / 2)
    assert res.rows[1][6] < res.rows[0][6]


def test_oracle_dimension_cap():
    with pytest.raises(ValueError, match="reduce the photon cutoff"):
        run_sweep("oracle_check", parse_config(SMALL_ORACLE + "max_dim = 100\n"))


def _write(tmp_path, text, name="cfg.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_cli_run_byte_identical(tmp_path, capsys):
    cfg = _write(tmp_path, 'preset = "paper"\n[time_grid]\nsteps = 5\n')
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", "angle_vs_time_tau", cfg, "-o", str(a)]) == 0
    assert main(["run", "angle_vs_time_tau", cfg, "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "max |theta|" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path, capsys):
    bad = _write(tmp_path, 'preset = "paper"\n[spin]\ntau = 1.5\n')
    assert main(["run", "angle_vs_time_tau", bad]) == 2
    assert "spin.tau" in capsys.readouterr().err
    good = _write(tmp_path, 'preset = "paper"\n', "good.toml")
    assert main(["run", "angle_vs_time_tau", good, "-o", str(tmp_path / "no" / "dir.csv")]) == 4
    assert main(["run", "angle_vs_time_tau", str(tmp_path / "missing.toml")]) == 4
    capped = _write(tmp_path, SMALL_ORACLE + "max_dim = 100\n", "cap.toml")
    assert main(["run", "oracle_check", capped]) == 3
    assert "reduce the photon cutoff" in capsys.readouterr().err


def test_cli_record_pipeline(tmp_path, capsys):
    cfg = _write(tmp_path, 'preset = "paper"\n[spin]\ntau = 0.7\n[estimate]\nshots = 10000\n')
    paths = {w: str(tmp_path / f"{w}.txt") for w in ("extremum", "zero", "background")}
    for i, (which, path) in enumerate(paths.items()):
        assert main(["simulate-record", cfg, "--which", which, "--seed", str(10 + i), "-o", path]) == 0
    assert read_record(paths["extremum"]).size == 10000
    assert main(["estimate", paths["extremum"], paths["zero"], paths["background"], "--bootstrap", "100"]) == 0
    header, row = capsys.readouterr().out.strip().splitlines()
    assert header == "tau_est_low,tau_est_high,tau_selected,bootstrap_se"
    low, high, sel, se = map(float, row.split(","))
    assert low + high == 1.0
    assert sel == pytest.approx(0.7, abs=0.05)


def test_cli_estimate_inconsistent_records(tmp_path):
    a = _write(tmp_path, "0.1\n0.3\n0.5\n", "a.txt")
    b = _write(tmp_path, "0.1\n0.11\n", "b.txt")
    c = _write(tmp_path, "0.0\n0.001\n", "c.txt")
    assert main(["estimate", a, b, c]) == 3


def test_module_entry_point(tmp_path):
    cfg = _write(tmp_path, 'preset = "paper"\n[time_grid]\nsteps = 2\n[tau_grid]\nsteps = 1\n')
    out = subprocess.run(
        [sys.executable, "-m", "faraday_spin", "run", "angle_vs_time_tau", cfg],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.splitlines()[0] == "time_s,tau,theta_rad,theta_mrad"
    assert len(out.stdout.splitlines()) == 3
