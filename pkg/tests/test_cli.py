import numpy as np
import pytest

from monbcs.cli import main

MINIMAL = """
L = 8
delta = 1.0
gamma = 0.0
t_max = 10
n_traj = 1
seed = 42
output_dir = {out}
"""


def write_cfg(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_run_smoke(tmp_path):
    out = tmp_path / "out"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out))
    assert main(["run", cfg]) == 0
    header, rows = read_csv(out / "entropy_timeseries.csv")
    assert header == ["t", "mean_S", "stderr_S", "mean_nn_pairing",
                      "stderr_nn_pairing"]
    assert len(rows) == 101          # t = 0 .. 10, stride 0.1
    header, rows = read_csv(out / "steady_state.csv")
    assert header == ["L", "J", "delta", "gamma", "n_traj", "s_steady",
                      "s_steady_err", "window_start", "window_end"]
    assert len(rows) == 1 and rows[0][0] == "8"
    manifest = (out / "manifest.txt").read_text()
    assert "seed = 42" in manifest
    assert "code_version = monbcs" in manifest
    assert "wall_time_s" in manifest


def test_run_missing_key_names_it(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out).replace("seed = 42", ""))
    assert main(["run", cfg]) == 2
    assert "seed" in capsys.readouterr().err


def test_run_unknown_key(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out) + "wibble = 3\n")
    assert main(["run", cfg]) == 2
    assert "unknown key" in capsys.readouterr().err


def test_run_overwrite_protection(tmp_path):
    out = tmp_path / "out"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out))
    assert main(["run", cfg]) == 0
    assert main(["run", cfg]) == 2           # manifest already present
    assert main(["run", cfg, "--overwrite"]) == 0


def test_run_set_override(tmp_path):
    out = tmp_path / "out"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out))
    assert main(["run", cfg, "--set", "t_max=5", "--set", "seed=7"]) == 0
    manifest = (out / "manifest.txt").read_text()
    assert "seed = 7" in manifest
    assert "t_max = 5.0" in manifest


def test_sweep_gamma_two_rows(tmp_path):
    out = tmp_path / "sweep"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out)
                    .replace("t_max = 10", "t_max = 2"))
    assert main(["sweep-gamma", cfg, "--gammas", "0,10"]) == 0
    header, rows = read_csv(out / "gamma_sweep.csv")
    assert len(rows) == 2
    assert not (out / "gamma_peak.csv").exists()


def test_sweep_gamma_peak_row(tmp_path):
    out = tmp_path / "sweep3"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out)
                    .replace("t_max = 10", "t_max = 2")
                    .replace("delta = 1.0", "delta = 2.0"))
    assert main(["sweep-gamma", cfg, "--gammas", "0,2,8", "--set", "n_traj=2"]) == 0
    header, rows = read_csv(out / "gamma_peak.csv")
    assert header == ["delta", "L", "gamma_peak", "gamma_grid_spacing"]
    assert len(rows) == 1


def test_sweep_gamma_unsorted_rejected(tmp_path, capsys):
    out = tmp_path / "bad"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out))
    assert main(["sweep-gamma", cfg, "--gammas", "10,0"]) == 2


def test_sweep_size_writes_fit(tmp_path):
    out = tmp_path / "sizes"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out)
                    .replace("t_max = 10", "t_max = 8")
                    .replace("gamma = 0.0", "gamma = 2.0"))
    assert main(["sweep-size", cfg, "--sizes", "4,8,12",
                 "--set", "L=8"]) == 0
    header, rows = read_csv(out / "scaling_fit.csv")
    assert header == ["delta", "gamma", "lambda", "intercept", "r_squared",
                      "L_list"]
    assert rows[0][5] == "4;8;12"
    header, rows = read_csv(out / "steady_state.csv")
    assert [r[0] for r in rows] == ["4", "8", "12"]


def test_gge_single_delta_exact(tmp_path):
    out = tmp_path / "gge.csv"
    assert main(["gge", "--deltas", "0", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["delta", "c_delta", "tau_over_L", "nn_pairing"]
    assert float(rows[0][1]) == pytest.approx(2 * np.log(2), abs=1e-10)


def test_gge_monotone_and_empty(tmp_path):
    out = tmp_path / "gge.csv"
    assert main(["gge", "--deltas", "0,1,2", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    c = [float(r[1]) for r in rows]
    assert c[0] > c[1] > c[2]
    assert main(["gge", "--deltas", ",", "--out", str(out)]) == 2


def test_csv_roundtrip_9_sig_digits(tmp_path):
    out = tmp_path / "out"
    cfg = write_cfg(tmp_path, MINIMAL.format(out=out)
                    .replace("gamma = 0.0", "gamma = 3.0"))
    assert main(["run", cfg]) == 0
    _, rows = read_csv(out / "entropy_timeseries.csv")
    for row in rows[::10]:
        for cell in row:
            assert f"{float(cell):.9g}" == cell


def test_selfcheck_passes(capsys):
    assert main(["selfcheck"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out.replace("PASS", "")
