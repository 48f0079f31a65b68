# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from zk_strip.apis.spectral import PhysicalField, StripGrid
from zk_strip.apis.weights import WeightSpec

from ..spectral.transforms import (
    derivative_coeffs,
    forward_coeffs,
    integrate,
    integrate_y,
    inverse_coeffs,
    y_derivative_values,
)
from .weight_functions import eval_weight


def pad_walls(values: np.ndarray) -> np.ndarray:
    """Zero wall values for sine-series samples (u, u_x, u_xx and u_yy vanish at the walls)."""
    return np.pad(values, ((0, 0), (1, 1)))


def derivative_density(coeffs: np.ndarray, grid: StripGrid, order: int) -> np.ndarray:
    """|D^order u|^2 sampled on the nodes including both walls."""
    if order == 0:
        return pad_walls(inverse_coeffs(coeffs, grid) ** 2)
    if order == 1:
        ux = inverse_coeffs(derivative_coeffs(coeffs, grid, 1, 0), grid)
        uy = y_derivative_values(coeffs, grid)
        return pad_walls(ux**2) + uy**2
    if order == 2:
        uxx = inverse_coeffs(derivative_coeffs(coeffs, grid, 2, 0), grid)
        uyy = inverse_coeffs(derivative_coeffs(coeffs, grid, 0, 2), grid)
        uxy = y_derivative_values(coeffs, grid, order_x=1)
        return pad_walls(uxx**2 + uyy**2) + uxy**2
    raise NotImplementedError(f"derivative order {order} is not supported (max 2)")


def weight_column(w: WeightSpec, grid: StripGrid) -> np.ndarray:
    return eval_weight(w, grid.x, 0)[:, None]


def weighted_l2_norm(f: PhysicalField, w: WeightSpec) -> float:
    return float(np.sqrt(integrate(f.values**2 * weight_column(w, f.grid), f.grid)))


def weighted_hk_norm(f: PhysicalField, k: int, w: WeightSpec) -> float:
    if k not in (0, 1, 2):
        raise NotImplementedError(f"Sobolev order {k} is not supported (max 2)")
    grid = f.grid
    coeffs = forward_coeffs(f.values, grid)
    psi = weight_column(w, grid)
    total = 0.0
    for j in range(k + 1):
        total += integrate(derivative_density(coeffs, grid, j) * psi, grid)
    return float(np.sqrt(total))


def _window_sums(column: np.ndarray, grid: StripGrid, window_width: float) -> np.ndarray:
    n_window = int(round(window_width / grid.dx))
    if window_width > grid.period or n_window > grid.nx:
        raise ValueError(
            f"window width {window_width} exceeds the box period {grid.period}"
        )
    if n_window < 1:
        raise ValueError(f"window width {window_width} is below the grid spacing")
    wrapped = np.concatenate([column, column[: n_window - 1]])
    csum = np.concatenate([[0.0], np.cumsum(wrapped)])
    return (csum[n_window : n_window + grid.nx] - csum[: grid.nx]) * grid.dx


def local_smoothing_profile(
    snapshots: List[PhysicalField],
    times: List[float],
    k_plus_1: int,
    window_width: float = 1.0,
    horizon: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Space-time integral of |D^{k+1} u|^2 over [x0, x0 + window) for every grid start x0."""
    if k_plus_1 not in (1, 2):
        raise NotImplementedError(f"k_plus_1 must be 1 or 2, got {k_plus_1}")
    if not snapshots:
        raise ValueError("empty snapshot series")
    if len(snapshots) != len(times):
        raise ValueError("snapshots and times differ in length")
    if np.any(np.diff(times) <= 0):
        raise ValueError("snapshot times must be strictly increasing")
    grid = snapshots[0].grid
    columns = np.array(
        [
            integrate_y(derivative_density(forward_coeffs(s.values, grid), grid, k_plus_1), grid)
            for s in snapshots
        ]
    )
    if len(snapshots) == 1:
        if horizon is None:
            raise ValueError("a single snapshot needs an explicit time horizon")
        column = columns[0] * horizon
    else:
        column = trapezoid(columns, x=np.asarray(times), axis=0)
    return grid.x, _window_sums(column, grid, window_width)


def lambda_functional(
    snapshots: List[PhysicalField],
    times: List[float],
    k_plus_1: int,
    window_width: float = 1.0,
    horizon: Optional[float] = None,
) -> float:
    _, values = local_smoothing_profile(snapshots, times, k_plus_1, window_width, horizon)
    return float(np.max(values))
