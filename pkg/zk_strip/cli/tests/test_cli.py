# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import argparse
import csv
import json

import numpy as np
import pytest

from zk_strip.cli.table import format_cell
from zk_strip.cli.zk import main
from zk_strip.distribution.output import csv_header, read_snapshot_binary

# How to run this test:
#
# ```bash
# pytest -s zk_strip/cli/tests/test_cli.py --tb=short
# ```

GRID = """
[grid]
x_min = -10
x_max = 10
nx = 32
width_L = pi
ny = 8
"""


def write_config(tmp_path, body: str, name: str = "run.cfg"):
    path = tmp_path / name
    path.write_text(GRID + body)
    return path


def run_cli(argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    return e.value.code


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(True) == "yes"
    assert format_cell(3) == "3"
    assert format_cell(0.123456789) == "0.123457"
    assert format_cell("C1") == "C1"


def test_check_passes(capsys):
    assert run_cli(["check"]) == 0
    out = capsys.readouterr().out
    assert "parseval" in out
    assert "FAIL" not in out


def test_check_covers_weight_admissibility_constant():
    from zk_strip.distribution.self_check import check_weights

    passed, detail = check_weights()
    assert passed
    assert "sup |psi'| / psi" in detail


def test_sweep_summary_names_linear_trend_fits(tmp_path, capsys):
    from zk_strip.cli.sweep import Sweep

    report = {
        "rows": [{"alpha": 0.1, "width_L": 3.14, "fitted_rate": 0.02, "fit_r2": 0.99}],
        "alpha_trend": {"variable": "alpha", "slope": 0.2, "intercept": 0.0, "r2": 0.98},
        "width_trend": {"variable": "L^-2", "slope": 1.1, "intercept": 0.0, "r2": 0.97},
    }
    (tmp_path / "report.json").write_text(json.dumps(report))
    Sweep(argparse.ArgumentParser().add_subparsers())._summarize(tmp_path, 0)
    out = capsys.readouterr().out
    assert "rate vs alpha (linear fit)" in out
    assert "rate vs L^-2 (linear fit)" in out
    assert "log(" not in out


def test_missing_config_is_usage_error(tmp_path):
    assert run_cli(["run", str(tmp_path / "nope.cfg")]) == 2


def test_invalid_config_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, "[time]\nt_end = 0.1\n").read_text().replace("nx = 32", "nx = 31")
    path = tmp_path / "bad.cfg"
    path.write_text(cfg)
    assert run_cli(["run", str(path), "--output-dir", str(tmp_path / "out")]) == 2
    assert "grid.nx must be even" in capsys.readouterr().out


def test_zero_initial_data(tmp_path):
    cfg = write_config(
        tmp_path,
        "[initial]\npreset = zero\n[time]\ndt = 0.01\nt_end = 0.05\nsnapshot_every = 1\n",
    )
    out = tmp_path / "out"
    assert run_cli(["run", str(cfg), "--output-dir", str(out), "--quiet"]) == 0

    rows = read_csv(out / "diagnostics.csv")
    assert rows[0] == csv_header(0)
    assert [float(r[0]) for r in rows[1:]] == pytest.approx([0.0, 0.01, 0.02, 0.03, 0.04, 0.05])
    for row in rows[1:]:
        assert all(float(cell) == 0.0 for cell in row[1:] if cell)
    assert rows[1][-1] == "" and rows[-1][-1] == ""
    assert json.loads((out / "status.json").read_text())["status"] == "completed"


def test_runs_are_reproducible(tmp_path):
    cfg = write_config(
        tmp_path,
        "[initial]\npreset = random_modes\namplitude = 0.1\n"
        "[time]\ndt = 0.01\nt_end = 0.05\n"
        "[weights]\n0.kind = exp_plus\n0.alpha = 0.1\n",
    )
    first, second = tmp_path / "a", tmp_path / "b"
    assert run_cli(["run", str(cfg), "--output-dir", str(first), "--quiet", "--seed", "3"]) == 0
    assert run_cli(["run", str(cfg), "--output-dir", str(second), "--quiet", "--seed", "3"]) == 0
    assert (first / "diagnostics.csv").read_bytes() == (second / "diagnostics.csv").read_bytes()


def test_binary_snapshots(tmp_path):
    cfg = write_config(
        tmp_path,
        "[initial]\namplitude = 0.2\n[time]\ndt = 0.01\nt_end = 0.02\nsnapshot_every = 1\n"
        "[output]\nsnapshots = true\n",
    )
    out = tmp_path / "out"
    assert run_cli(["run", str(cfg), "--output-dir", str(out), "--quiet"]) == 0
    paths = sorted((out / "snapshots").glob("*.zksn"))
    assert len(paths) == 3
    field, t = read_snapshot_binary(paths[0])
    assert t == 0.0
    assert field.grid.nx == 32 and field.grid.ny == 8
    assert np.max(np.abs(field.values)) == pytest.approx(0.2)
    _, t_last = read_snapshot_binary(paths[-1])
    assert t_last == pytest.approx(0.02)


def test_csv_snapshots_override(tmp_path):
    cfg = write_config(
        tmp_path,
        "[time]\ndt = 0.01\nt_end = 0.01\n[output]\nsnapshots = true\n",
    )
    out = tmp_path / "out"
    assert run_cli(["run", str(cfg), "--output-dir", str(out), "--quiet", "--snapshot-format", "csv"]) == 0
    rows = read_csv(out / "snapshots" / "snapshot_00000.csv")
    assert rows[0] == ["t", "x", "y", "u"]
    assert len(rows) == 1 + 32 * 8


def test_scenario_needs_scenario_block(tmp_path, capsys):
    cfg = write_config(tmp_path, "[time]\nt_end = 0.1\n")
    assert run_cli(["scenario", str(cfg), "--output-dir", str(tmp_path / "out")]) == 2
    assert "missing required key scenario" in capsys.readouterr().out


def test_scenario_report(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        "[physics]\ndelta = 0\n"
        "[time]\ndt = 0.01\nt_end = 0.5\nsnapshot_every = 5\nnonlinear = false\n"
        "[scenario]\nkind = C1_absorption\nparams.beta0 = 0.5\n",
    )
    out = tmp_path / "out"
    assert run_cli(["scenario", str(cfg), "--output-dir", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["scenario"] == "C1_absorption"
    assert report["bound_holds"] is True
    assert report["fitted_rate"] == pytest.approx(0.5, rel=1e-6)
    assert "fitted_rate" in capsys.readouterr().out
