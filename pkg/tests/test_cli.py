import csv
import io
import json

import numpy as np
import pytest

from trapped_nlcs import cli, figures


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_format_value():
    assert figures.format_value(0.0) == "0.0"
    assert figures.format_value(5e-4) == "5e-04"
    assert figures.format_value(-2.5e-7) == "-2.5e-07"
    assert float(figures.format_value(1 / 3 * 1e-5)) == 1 / 3 * 1e-5
    assert figures.format_value(0.25) == "0.25"
    assert figures.format_value(3) == "3"
    assert figures.format_value("ok") == "ok"
    assert float(figures.format_value(0.1234567891234567)) == 0.1234567891234567


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        figures.SweepSpec("delta_p_sq", "even", (0.1, 0.05))
    with pytest.raises(ValueError):
        figures.SweepSpec("delta_p_sq", "even", (0.0, 0.05))
    with pytest.raises(ValueError):
        figures.SweepSpec("delta_p_sq", "even", (0.1,), omega_ratio=-1)
    with pytest.raises(ValueError):
        figures.SweepSpec("entropy", "even", (0.1,))


def test_fig1_csv(tmp_path):
    out = tmp_path / "fig1.csv"
    assert cli.main(["fig1", "--eta-count", "12", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == list(figures.COLUMNS["delta_p_sq"])
    assert len(rows) == 24
    assert {float(r["omega_ratio"]) for r in rows} == {1e-3, 1e-4}
    assert all(r["status"] == "ok" and float(r["tail_mass"]) < 1e-10 for r in rows)
    mid = [r for r in rows if float(r["omega_ratio"]) == 1e-3 and 0.03 < float(r["eta"]) < 0.1]
    assert mid and all(float(r["delta_p_sq"]) < 0.5 for r in mid)


def test_fig1_vacuum_limit():
    rows = figures.sweep_rows(figures.fig1_spec((0.5, 0.9), omega_ratio=1e-7))
    assert rows[-1]["delta_p_sq"] == pytest.approx(0.5, abs=1e-6)
    assert rows[0]["delta_p_sq"] < rows[1]["delta_p_sq"] < 0.5


def test_fig2_csv(tmp_path):
    out = tmp_path / "fig2.csv"
    assert cli.main(["fig2", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == list(figures.COLUMNS["pn"])
    odd = [r for r in rows if int(r["n"]) % 2]
    assert odd and all(r["pn"] == "0.0" for r in odd)
    by_eta = {}
    for r in rows:
        by_eta.setdefault(float(r["eta"]), []).append(float(r["pn"]))
    assert by_eta[0.1][0] > 0.99
    width = {eta: np.dot(np.arange(len(p)), p) for eta, p in by_eta.items()}
    assert width[0.008] > width[0.1]


def test_fig3_stdout(capsys):
    assert cli.main(["fig3", "--eta-count", "15"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    q = [float(r["mandel_q"]) for r in rows]
    assert len(q) == 15 and max(q) < 0
    assert q[-1] == pytest.approx(-1, abs=0.05)


def test_fig3_small_alpha_limit():
    rows = figures.sweep_rows(figures.fig3_spec((3.0,), omega_ratio=1e-9))
    assert rows[0]["mandel_q"] == pytest.approx(-1.0, abs=1e-6)


def test_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    out = tmp_path / "out.csv"
    cfg.write_text(json.dumps({"quantity": "mandel_q", "parity": "odd", "eta_range": [0.05, 0.2],
                               "eta_count": 4, "omega_ratio": [1e-3], "dim": 24, "output": str(out)}))
    assert cli.main(["fig3", "--config", str(cfg)]) == 0
    rows = read_csv(out)
    assert len(rows) == 4 and rows[0]["dim"] == "24"
    assert float(rows[0]["eta"]) == pytest.approx(0.05)


def test_explicit_grid_in_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"eta_grid": [0.02, 0.04], "omega_ratio": 1e-3}))
    out = tmp_path / "o.csv"
    assert cli.main(["fig1", "--config", str(cfg), "--out", str(out)]) == 0
    assert [float(r["eta"]) for r in read_csv(out)] == [0.02, 0.04]


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["fig1", "--eta-count", "20", "--out", str(a)])
    cli.main(["fig1", "--eta-count", "20", "--out", str(b), "--jobs", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_singular_row_flagged():
    # L_1^0(eta^2) = 1 - eta^2 vanishes at eta = 1
    rows = figures.sweep_rows(figures.fig1_spec((0.5, 1.0), omega_ratio=1e-3, dim=4, max_dim=4))
    assert rows[0]["status"] == "ok"
    assert rows[1]["status"].startswith("singular")
    assert np.isnan(rows[1]["delta_p_sq"])


def test_invalid_input_exit_code(tmp_path, capsys):
    assert cli.main(["fig1", "--eta-min", "0.2", "--eta-max", "0.1", "--eta-count", "3"]) == cli.EXIT_INVALID
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert cli.main(["fig2", "--config", str(bad)]) == cli.EXIT_INVALID
    assert cli.main(["verify", "--eta", "-1"]) == cli.EXIT_INVALID
    assert "error" in capsys.readouterr().err


def test_verify_json_success(capsys):
    code = cli.main(["verify", "--parity", "odd", "--eta", "0.2", "--ratio", "0.04", "--dim", "12", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == cli.EXIT_OK
    assert report["fidelity"] > 0.999 and report["diagnostics"]["converged"]


def test_verify_threshold_failure(capsys):
    code = cli.main(["verify", "--eta", "0.2", "--ratio", "0.04", "--dim", "12", "--threshold", "1.5"])
    assert code == cli.EXIT_FIDELITY
    assert "fidelity" in capsys.readouterr().out


def test_verify_without_dissipation_reports_nonconvergence(capsys):
    code = cli.main(["verify", "--gamma", "0", "--dim", "12", "--t-max", "100"])
    assert code == cli.EXIT_NOT_CONVERGED
    assert "not converged" in capsys.readouterr().out


def test_report_command(capsys):
    assert cli.main(["report", "--eta", "0.05", "--ratio", "0.001", "--parity", "odd"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["mandel_q"] < 0 and out["alpha"] == pytest.approx(0.4)
    assert sum(out["pn"]) == pytest.approx(1.0)
