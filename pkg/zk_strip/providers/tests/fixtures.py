# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import math

import numpy as np

from zk_strip.apis.spectral import PhysicalField, StripGrid


def periodic_grid(nx: int = 32, ny: int = 8, width_L: float = math.pi) -> StripGrid:
    """x-box [-pi, pi) so integer x-frequencies are exactly representable."""
    return StripGrid(x_min=-math.pi, x_max=math.pi, nx=nx, width_L=width_L, ny=ny)


def strip_grid(
    nx: int = 128, ny: int = 16, width_L: float = math.pi, half_width: float = 12.0
) -> StripGrid:
    return StripGrid(x_min=-half_width, x_max=half_width, nx=nx, width_L=width_L, ny=ny)


def random_field(grid: StripGrid, seed: int = 0) -> PhysicalField:
    rng = np.random.default_rng(seed)
    return PhysicalField(grid=grid, values=rng.standard_normal(grid.shape))


def bump(
    grid: StripGrid,
    amplitude: float = 1.0,
    center: float = 0.0,
    width: float = 1.0,
    mode: int = 1,
) -> PhysicalField:
    return PhysicalField.from_function(
        grid,
        lambda X, Y: amplitude
        * np.exp(-(((X - center) / width) ** 2))
        * np.sin(mode * np.pi * Y / grid.width_L),
    )
