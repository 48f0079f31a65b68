# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

"""Artifacts written by a run: diagnostics CSV, field snapshots, JSON reports.

Binary snapshot layout, little-endian throughout:

    b"ZKSN" | u32 version | f64 x_min | f64 x_max | i64 nx | f64 width_L | i64 ny
    | f64 t | nx * ny f64 values, row-major (x index outer)
"""

import csv
import json
import struct
from pathlib import Path
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel

from zk_strip.apis.evolution import Trajectory
from zk_strip.apis.scenarios import RateScalingTable
from zk_strip.apis.spectral import PhysicalField, StripGrid
from zk_strip.distribution.datatypes import SnapshotFormat
from zk_strip.distribution.utils.serialize import EnumEncoder, format_float

SNAPSHOT_MAGIC = b"ZKSN"
SNAPSHOT_VERSION = 1
_HEADER = struct.Struct("<4sIddqdqd")


def csv_header(n_weights: int) -> List[str]:
    return (
        ["t", "l2", "h1", "energy", "seam_fraction", "wraparound"]
        + [f"weighted_l2[{i}]" for i in range(n_weights)]
        + ["residual_l2"]
        + [f"residual_weighted[{i}]" for i in range(n_weights)]
    )


def write_diagnostics_csv(path: Path, traj: Trajectory) -> None:
    n_weights = len(traj.weights)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(csv_header(n_weights))
        for r in traj.diagnostics:
            writer.writerow(
                [format_float(v) for v in (r.t, r.l2, r.h1, r.energy, r.seam_fraction)]
                + [int(r.wraparound)]
                + [format_float(v) for v in r.weighted_l2]
                + [format_float(r.identity_residual_l2)]
                + [format_float(v) for v in r.identity_residual_weighted]
            )


def write_snapshot_binary(path: Path, field: PhysicalField, t: float) -> None:
    g = field.grid
    header = _HEADER.pack(
        SNAPSHOT_MAGIC, SNAPSHOT_VERSION, g.x_min, g.x_max, g.nx, g.width_L, g.ny, t
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_snapshot_binary(path: Path) -> Tuple[PhysicalField, float]:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path} is too short to be a snapshot")
    magic, version, x_min, x_max, nx, width_L, ny, t = _HEADER.unpack_from(data)
    if magic != SNAPSHOT_MAGIC:
        raise ValueError(f"{path} is not a snapshot file (magic {magic!r})")
    if version != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {version}")
    grid = StripGrid(x_min=x_min, x_max=x_max, nx=nx, width_L=width_L, ny=ny)
    values = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    if values.size != nx * ny:
        raise ValueError(f"{path} holds {values.size} values, expected {nx * ny}")
    return PhysicalField(grid=grid, values=values.reshape(nx, ny).astype(np.float64)), t


def write_snapshot_csv(path: Path, field: PhysicalField, t: float) -> None:
    g = field.grid
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["t", "x", "y", "u"])
        for i, x in enumerate(g.x):
            for j, y in enumerate(g.y):
                writer.writerow(
                    [format_float(t), format_float(x), format_float(y), format_float(field.values[i, j])]
                )


def write_snapshots(directory: Path, traj: Trajectory, fmt: SnapshotFormat) -> List[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, (t, field) in enumerate(zip(traj.times, traj.snapshots)):
        if fmt == SnapshotFormat.binary:
            path = directory / f"snapshot_{i:05d}.zksn"
            write_snapshot_binary(path, field, t)
        else:
            path = directory / f"snapshot_{i:05d}.csv"
            write_snapshot_csv(path, field, t)
        paths.append(path)
    return paths


def write_report(path: Path, report: BaseModel) -> None:
    with open(path, "w") as f:
        f.write(json.dumps(report.model_dump(), cls=EnumEncoder, indent=2, sort_keys=True))
        f.write("\n")


def write_rate_table_csv(path: Path, table: RateScalingTable) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["alpha", "width_L", "fitted_rate", "fit_r2"])
        for row in table.rows:
            writer.writerow(
                [format_float(v) for v in (row.alpha, row.width_L, row.fitted_rate, row.fit_r2)]
            )
