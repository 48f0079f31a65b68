# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

"""Fourier(x) x sine(y) transforms on a StripGrid.

Normalization: the x transform carries 1/nx, the y transform is the discrete
analogue of the orthonormal basis sqrt(2/L) sin(pi l y / L). With this choice

    sum u^2 dx dy == (x_max - x_min) * sum |c|^2

holds exactly, which is what ``spectral_norm_sq`` returns.

Odd y-derivatives of a sine series are cosine series. They are never stored as
SpectralFields; ``y_derivative_values`` evaluates them on the interior nodes
plus both walls and ``y_flux_divergence`` maps the derivative of such a flux
back onto the sine basis.
"""

import os

import numpy as np
import scipy.fft

from zk_strip.apis.spectral import PhysicalField, SpectralField, StripGrid

FFT_WORKERS = int(os.getenv("ZK_STRIP_FFT_WORKERS", "1"))

SYMMETRY_TOLERANCE = 1e-10


def _y_scale(grid: StripGrid) -> float:
    return np.sqrt(2.0 / grid.width_L)


def forward_coeffs(values: np.ndarray, grid: StripGrid) -> np.ndarray:
    cx = scipy.fft.fft(values, axis=0, norm="forward", workers=FFT_WORKERS)
    return (
        _y_scale(grid)
        * grid.dy
        / 2.0
        * scipy.fft.dst(cx, type=1, axis=1, workers=FFT_WORKERS)
    )


def inverse_coeffs(coeffs: np.ndarray, grid: StripGrid) -> np.ndarray:
    cy = _y_scale(grid) / 2.0 * scipy.fft.dst(coeffs, type=1, axis=1, workers=FFT_WORKERS)
    return scipy.fft.ifft(cy, axis=0, norm="forward", workers=FFT_WORKERS).real


def forward_transform(f: PhysicalField) -> SpectralField:
    if not np.all(np.isfinite(f.values)):
        raise ValueError("cannot transform a field with non-finite values")
    return SpectralField(grid=f.grid, coeffs=forward_coeffs(f.values, f.grid))


def symmetry_defect(coeffs: np.ndarray) -> float:
    """Largest |c(-k, l) - conj(c(k, l))| relative to the coefficient scale."""
    mirrored = np.roll(coeffs[::-1], 1, axis=0)
    scale = max(1.0, float(np.max(np.abs(coeffs), initial=0.0)))
    return float(np.max(np.abs(coeffs - np.conj(mirrored)), initial=0.0)) / scale


def inverse_transform(s: SpectralField) -> PhysicalField:
    defect = symmetry_defect(s.coeffs)
    if defect > SYMMETRY_TOLERANCE:
        raise ValueError(
            f"coefficients violate conjugate symmetry (defect {defect:.3e}), "
            "spectral state is corrupted"
        )
    return PhysicalField(grid=s.grid, values=inverse_coeffs(s.coeffs, s.grid))


def x_derivative_factor(grid: StripGrid, order_x: int) -> np.ndarray:
    factor = (1j * grid.xi) ** order_x
    if order_x % 2 == 1:
        # the unpaired Nyquist column has no real odd derivative
        factor[grid.nx // 2] = 0.0
    return factor


def derivative_coeffs(
    coeffs: np.ndarray, grid: StripGrid, order_x: int, order_y: int
) -> np.ndarray:
    if order_x < 0 or order_y < 0:
        raise ValueError(f"derivative orders must be non-negative, got ({order_x}, {order_y})")
    if order_y % 2 == 1:
        raise ValueError(
            "odd y-derivatives leave the sine basis; use y_derivative_values instead"
        )
    out = coeffs
    if order_x:
        out = out * x_derivative_factor(grid, order_x)[:, None]
    if order_y:
        out = out * ((-grid.lam) ** (order_y // 2))[None, :]
    return out


def derivative(s: SpectralField, order_x: int, order_y: int) -> SpectralField:
    return s.with_coeffs(derivative_coeffs(s.coeffs, s.grid, order_x, order_y))


def dealias_mask(grid: StripGrid) -> np.ndarray:
    keep_k = np.abs(grid.k_index) <= grid.nx / 3.0
    keep_l = grid.l_modes <= 2.0 * grid.ny / 3.0
    return keep_k[:, None] & keep_l[None, :]


def dealias(s: SpectralField) -> SpectralField:
    return s.with_coeffs(np.where(dealias_mask(s.grid), s.coeffs, 0.0))


def y_derivative_values(coeffs: np.ndarray, grid: StripGrid, order_x: int = 0) -> np.ndarray:
    """Samples of d_x^order_x d_y u on the ny + 2 nodes y_j = j dy, walls included."""
    c = coeffs
    if order_x:
        c = c * x_derivative_factor(grid, order_x)[:, None]
    per_x = scipy.fft.ifft(c, axis=0, norm="forward", workers=FFT_WORKERS).real
    d = per_x * (_y_scale(grid) * np.pi * grid.l_modes / grid.width_L)[None, :]
    padded = np.zeros((grid.nx, grid.ny + 2))
    padded[:, 1:-1] = d
    return scipy.fft.dct(padded, type=1, axis=1, workers=FFT_WORKERS) / 2.0


def y_flux_divergence(flux: np.ndarray, grid: StripGrid) -> np.ndarray:
    """Sine coefficients of d_y F for a flux F sampled on the nodes including both walls."""
    if flux.shape != (grid.nx, grid.ny + 2):
        raise ValueError(
            f"flux must be sampled on ({grid.nx}, {grid.ny + 2}) nodes, got {flux.shape}"
        )
    cosine = scipy.fft.dct(flux, type=1, axis=1, workers=FFT_WORKERS) / (grid.ny + 1)
    n = grid.l_modes
    sine = -(np.pi * n / grid.width_L)[None, :] * cosine[:, 1:-1] / _y_scale(grid)
    return scipy.fft.fft(sine, axis=0, norm="forward", workers=FFT_WORKERS)


def with_walls(values: np.ndarray) -> np.ndarray:
    """Wall-node extension of interior samples, exact for y-independent coefficients."""
    return np.concatenate([values[:, :1], values, values[:, -1:]], axis=1)


def integrate(values: np.ndarray, grid: StripGrid) -> float:
    """Rectangle rule in x; trapezoid in y (interior nodes, or walls included)."""
    if values.shape == grid.shape:
        return float(np.sum(values) * grid.cell_area)
    if values.shape == (grid.nx, grid.ny + 2):
        inner = np.sum(values[:, 1:-1])
        walls = 0.5 * (np.sum(values[:, 0]) + np.sum(values[:, -1]))
        return float((inner + walls) * grid.cell_area)
    raise ValueError(f"cannot integrate array of shape {values.shape} on {grid.shape} grid")


def integrate_y(values: np.ndarray, grid: StripGrid) -> np.ndarray:
    """Per-x column integrals over (0, L)."""
    if values.shape == grid.shape:
        return np.sum(values, axis=1) * grid.dy
    inner = np.sum(values[:, 1:-1], axis=1)
    return (inner + 0.5 * (values[:, 0] + values[:, -1])) * grid.dy


def spectral_norm_sq(coeffs: np.ndarray, grid: StripGrid) -> float:
    return float(grid.period * np.sum(np.abs(coeffs) ** 2))


def translate(s: SpectralField, shift: float) -> SpectralField:
    """Coefficients of x -> u(x + shift) on the periodic box."""
    phase = np.exp(1j * s.grid.xi * shift)
    out = s.coeffs * phase[:, None]
    nyq = s.grid.nx // 2
    out[nyq] = out[nyq].real
    return s.with_coeffs(out)
