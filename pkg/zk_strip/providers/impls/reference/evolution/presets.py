# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

"""Damping coefficient and initial-condition presets.

The periodic x-box wraps x_max onto x_min, so one-sided plateaus get a seam
ramp back up to the plateau level next to the opposite box edge. Absorbing
sponges straddle the same seam.
"""

import numpy as np

from zk_strip.apis.evolution import (
    Coefficients,
    DampingPreset,
    InitialPreset,
    StructureFlag,
)
from zk_strip.apis.spectral import PhysicalField, StripGrid

from ..weights.smoothstep import smoothstep

RANDOM_MODE_COUNT = 3


def _check_plateau(grid: StripGrid, R: float, width: float):
    if width <= 0:
        raise ValueError(f"plateau transition width must be positive, got {width}")
    if R < width:
        raise ValueError(f"plateau radius R={R} must be at least the transition width {width}")
    if R + width > min(-grid.x_min, grid.x_max):
        raise ValueError(
            f"plateau radius R={R} leaves no room inside the box [{grid.x_min}, {grid.x_max}]"
        )


def _seam(x: np.ndarray, edge: float, width: float, inward: float) -> np.ndarray:
    # rises to 1 at the box edge, zero once `width` inside the box
    return smoothstep((width - inward * (x - edge)) / width)


def plateau_profile(
    grid: StripGrid,
    preset: DampingPreset,
    a: float,
    R: float,
    width: float = 1.0,
) -> np.ndarray:
    """x-profile a(x) of the parabolic damping for a preset."""
    x = grid.x
    if preset == DampingPreset.none:
        return np.zeros_like(x)
    if preset == DampingPreset.constant:
        return np.full_like(x, a)

    _check_plateau(grid, R, width)
    inner = R - width
    if preset == DampingPreset.both_infinities:
        return a * smoothstep((np.abs(x) - inner) / width)
    if preset == DampingPreset.plus_infinity:
        right = smoothstep((x - inner) / width)
        return a * np.maximum(right, _seam(x, grid.x_min, width, 1.0))
    if preset == DampingPreset.minus_infinity:
        left = smoothstep((-x - inner) / width)
        return a * np.maximum(left, _seam(x, grid.x_max, width, -1.0))
    raise ValueError(f"Unknown damping preset `{preset}`")


def sponge_profile(grid: StripGrid, strength: float, width: float) -> np.ndarray:
    """Absorbing layer of height `strength` across the periodic seam."""
    if strength == 0 or width == 0:
        return np.zeros(grid.nx)
    x = grid.x
    left = _seam(x, grid.x_min, width, 1.0)
    right = _seam(x, grid.x_max, width, -1.0)
    return strength * np.maximum(left, right)


_PRESET_FLAGS = {
    DampingPreset.both_infinities: [StructureFlag.both_infinities],
    DampingPreset.minus_infinity: [StructureFlag.minus_infinity],
    DampingPreset.plus_infinity: [StructureFlag.plus_infinity],
}


def damping_coefficients(
    grid: StripGrid,
    preset: DampingPreset = DampingPreset.none,
    b: float = 0.0,
    delta: float = 0.0,
    a: float = 0.0,
    R: float = 1.0,
    width: float = 1.0,
    absorption: float = 0.0,
    sponge_strength: float = 0.0,
    sponge_width: float = 0.0,
) -> Coefficients:
    preset = DampingPreset(preset)
    if absorption < 0:
        raise ValueError(f"absorption must be non-negative, got {absorption}")
    profile = plateau_profile(grid, preset, a, R, width)
    a0 = absorption + sponge_profile(grid, sponge_strength, sponge_width)

    def column(values):
        return PhysicalField(grid=grid, values=np.repeat(values[:, None], grid.ny, axis=1))

    flags = _PRESET_FLAGS.get(preset, [])
    return Coefficients(
        b=b,
        delta=delta,
        a0=column(np.broadcast_to(a0, grid.x.shape).astype(float)),
        a1=column(profile),
        a2=column(profile),
        structure_flags=flags,
        plateau_a=a if flags else None,
        plateau_R=R if flags else None,
    )


def initial_condition(
    grid: StripGrid,
    preset: InitialPreset = InitialPreset.gaussian,
    amplitude: float = 0.1,
    center: float = 0.0,
    width: float = 1.0,
    y_mode: int = 1,
    seed: int = 0,
) -> PhysicalField:
    """Preset initial data; `amplitude` is the peak modulus of the profile."""
    preset = InitialPreset(preset)
    if preset == InitialPreset.zero:
        return PhysicalField.zeros(grid)
    if width <= 0:
        raise ValueError(f"initial width must be positive, got {width}")
    if not 1 <= y_mode <= grid.ny:
        raise ValueError(f"y_mode must lie in [1, {grid.ny}], got {y_mode}")

    X, Y = grid.meshgrid()
    L = grid.width_L
    xs = (X - center) / width
    if preset == InitialPreset.gaussian:
        values = np.exp(-(xs**2)) * np.sin(np.pi * y_mode * Y / L)
    elif preset == InitialPreset.sech2:
        values = np.cosh(xs) ** -2 * np.sin(np.pi * y_mode * Y / L)
    elif preset == InitialPreset.random_modes:
        rng = np.random.default_rng(seed)
        values = np.zeros(grid.shape)
        for l in range(1, min(RANDOM_MODE_COUNT, grid.ny) + 1):
            c, s = rng.normal(size=(2, RANDOM_MODE_COUNT))
            profile = sum(
                c[j] * np.cos(j * xs) + s[j] * np.sin(j * xs) for j in range(RANDOM_MODE_COUNT)
            )
            values += profile * np.sin(np.pi * l * Y / L)
        values *= np.exp(-(xs**2))
    else:
        raise ValueError(f"Unknown initial preset `{preset}`")

    peak = np.max(np.abs(values))
    if peak > 0:
        values = values * (amplitude / peak)
    return PhysicalField(grid=grid, values=values)
