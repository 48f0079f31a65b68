# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Optional

from termcolor import cprint

from zk_strip.apis.evolution import BlowUpError, DiagnosticProbes, RunStatus
from zk_strip.apis.scenarios import Scenario
from zk_strip.distribution.configure import ConfigValidationError
from zk_strip.distribution.datatypes import RunSpec, SnapshotFormat
from zk_strip.distribution.output import (
    write_diagnostics_csv,
    write_rate_table_csv,
    write_report,
    write_snapshots,
)
from zk_strip.distribution.utils.config_dirs import RUNS_BASE_DIR
from zk_strip.providers.impls.reference.evolution import (
    damping_coefficients,
    initial_condition,
    run,
)
from zk_strip.providers.impls.reference.scenarios import (
    locate_amplitude_threshold,
    rate_scaling_study,
    run_scenario,
)
from zk_strip.providers.utils.telemetry import tracing

log = logging.getLogger(__name__)


class ExitCode(int, Enum):
    success = 0
    check_failed = 1
    validation_failed = 2
    blow_up = 3
    bound_violated = 4


class RunMode(Enum):
    run = "run"
    scenario = "scenario"
    sweep = "sweep"


def resolve_output_dir(spec: RunSpec, output_dir: Optional[Path]) -> Path:
    if output_dir is not None:
        path = Path(output_dir)
    elif spec.output.directory:
        path = Path(spec.output.directory)
    else:
        path = RUNS_BASE_DIR / spec.name
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_status(out: Path, status: RunStatus, failure_time: Optional[float], message: Optional[str]):
    with open(out / "status.json", "w") as f:
        json.dump(
            {"status": status.value, "failure_time": failure_time, "message": message},
            f,
            indent=2,
            sort_keys=True,
        )
        f.write("\n")


def _run_plain(spec: RunSpec, out: Path, snapshot_format: SnapshotFormat, seed: int) -> ExitCode:
    grid = spec.grid
    d = spec.physics.damping
    coeffs = damping_coefficients(
        grid,
        d.preset,
        b=spec.physics.b,
        delta=spec.physics.delta,
        a=d.a,
        R=d.R,
        width=d.width,
        absorption=d.absorption,
        sponge_strength=d.sponge_strength,
        sponge_width=d.sponge_width,
    )
    init = spec.initial
    u0 = initial_condition(
        grid,
        init.preset,
        amplitude=init.amplitude,
        center=init.center,
        width=init.width,
        y_mode=init.y_mode,
        seed=seed,
    )
    traj = run(u0, None, coeffs, spec.time, DiagnosticProbes(weights=spec.weights))

    write_diagnostics_csv(out / "diagnostics.csv", traj)
    if spec.output.snapshots:
        write_snapshots(out / "snapshots", traj, snapshot_format)
    _write_status(out, traj.status, traj.failure_time, traj.message)

    if traj.status == RunStatus.blew_up:
        cprint(f"Run blew up at t={traj.failure_time:.6g}; partial outputs in {out}", "red")
        return ExitCode.blow_up
    return ExitCode.success


def _run_scenario(spec: RunSpec, out: Path, snapshot_format: SnapshotFormat) -> ExitCode:
    if spec.scenario is None:
        raise ConfigValidationError(["missing required key scenario (needed by `zk scenario`)"])
    block = spec.scenario
    scenario = Scenario(kind=block.kind, params=block.params)

    if block.threshold_search:
        amplitude, report = locate_amplitude_threshold(
            scenario,
            spec.grid,
            spec.time,
            block.threshold_low,
            block.threshold_high,
            iterations=block.threshold_iterations,
            delta=spec.physics.delta,
        )
        scenario = Scenario(
            kind=block.kind, params=block.params.model_copy(update={"amplitude": amplitude})
        )
        cprint(f"Largest passing amplitude: {amplitude:.6g}", "green")

    traj, report = run_scenario(
        scenario,
        spec.grid,
        spec.time,
        delta=spec.physics.delta,
        b=spec.physics.b,
        tolerance=block.tolerance,
    )
    write_diagnostics_csv(out / "diagnostics.csv", traj)
    if spec.output.snapshots:
        write_snapshots(out / "snapshots", traj, snapshot_format)
    if spec.output.report:
        write_report(out / "report.json", report)
    _write_status(out, traj.status, traj.failure_time, traj.message)

    if report.blew_up:
        cprint(f"Scenario blew up at t={traj.failure_time:.6g}", "red")
        return ExitCode.blow_up
    if not report.bound_holds:
        cprint(f"Decay bound violated (margin {report.bound_margin:.3e})", "yellow")
        return ExitCode.bound_violated
    return ExitCode.success


def _run_sweep(spec: RunSpec, out: Path) -> ExitCode:
    if spec.sweep is None:
        raise ConfigValidationError(["missing required key sweep (needed by `zk sweep`)"])
    block = spec.sweep
    table = rate_scaling_study(
        block.kind,
        block.alphas,
        block.L_values,
        spec.grid,
        spec.time,
        params=block.params,
        reference_alpha=block.reference_alpha,
        reference_L=block.reference_L,
        max_workers=block.max_workers,
    )
    write_rate_table_csv(out / "rates.csv", table)
    if spec.output.report:
        write_report(out / "report.json", table)
    return ExitCode.success


def run_command(
    spec: RunSpec,
    mode: RunMode = RunMode.run,
    output_dir: Optional[Path] = None,
    snapshot_format: Optional[SnapshotFormat] = None,
    seed: Optional[int] = None,
) -> ExitCode:
    out = resolve_output_dir(spec, output_dir)
    fmt = snapshot_format or spec.output.snapshot_format
    seed = spec.seed if seed is None else seed
    log.info(f"{mode.value} `{spec.name}` writing to {out}")

    with tracing.span(mode.value, {"name": spec.name}):
        try:
            if mode == RunMode.run:
                return _run_plain(spec, out, fmt, seed)
            if mode == RunMode.scenario:
                return _run_scenario(spec, out, fmt)
            return _run_sweep(spec, out)
        except BlowUpError as e:
            cprint(str(e), "red")
            _write_status(out, RunStatus.blew_up, e.t, str(e))
            return ExitCode.blow_up
