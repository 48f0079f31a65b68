# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import logging
import threading
from collections import OrderedDict
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, PrivateAttr

from zk_strip.apis.spectral import SpectralField, StripGrid

log = logging.getLogger(__name__)

# below this |z| phi_1 switches to its Taylor series
PHI1_TAYLOR_RADIUS = 1e-2

EXPONENTIAL_CACHE_SIZE = 4


def phi1(z: np.ndarray) -> np.ndarray:
    """(e^z - 1) / z with the removable singularity at 0 evaluated stably."""
    z = np.asarray(z, dtype=np.complex128)
    small = np.abs(z) < PHI1_TAYLOR_RADIUS
    out = np.empty_like(z)
    zs = z[small]
    out[small] = 1 + zs / 2 + zs**2 / 6 + zs**3 / 24 + zs**4 / 120 + zs**5 / 720
    zl = z[~small]
    out[~small] = np.expm1(zl) / zl
    return out


class LinearSymbol(BaseModel):
    """sigma(k, l) = i(xi^3 + xi lambda_l - b xi) - delta (xi^4 + lambda_l^2)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: StripGrid
    b: float
    delta: float
    table: np.ndarray

    _cache: "OrderedDict[float, Tuple[np.ndarray, np.ndarray]]" = PrivateAttr(
        default_factory=OrderedDict
    )
    _lock: threading.Lock = PrivateAttr(default_factory=threading.Lock)

    def factors(self, dt: float) -> Tuple[np.ndarray, np.ndarray]:
        """(exp(sigma dt), dt phi_1(sigma dt)), cached per dt."""
        with self._lock:
            hit = self._cache.get(dt)
            if hit is not None:
                self._cache.move_to_end(dt)
                return hit
        z = self.table * dt
        entry = (np.exp(z), dt * phi1(z))
        with self._lock:
            self._cache[dt] = entry
            if len(self._cache) > EXPONENTIAL_CACHE_SIZE:
                self._cache.popitem(last=False)
        log.debug(f"cached propagator factors for dt={dt:g}")
        return entry


def build_symbol(grid: StripGrid, b: float, delta: float) -> LinearSymbol:
    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    xi = grid.xi[:, None]
    lam = grid.lam[None, :]
    odd = xi**3 + xi * lam - b * xi
    # keep the unpaired Nyquist column real so fields stay real
    odd[grid.nx // 2, :] = 0.0
    table = 1j * odd - delta * (xi**4 + lam**2)
    return LinearSymbol(grid=grid, b=b, delta=delta, table=table)


def _check_grid(s: SpectralField, sym: LinearSymbol):
    if s.grid != sym.grid:
        raise ValueError("spectral field and symbol live on different grids")


def apply_propagator(s: SpectralField, sym: LinearSymbol, dt: float) -> SpectralField:
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    _check_grid(s, sym)
    if dt == 0:
        return s.with_coeffs(s.coeffs.copy())
    expo, _ = sym.factors(dt)
    return s.with_coeffs(expo * s.coeffs)


def duhamel_forced_step(
    s: SpectralField, sym: LinearSymbol, f_hat: SpectralField, dt: float
) -> SpectralField:
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")
    _check_grid(s, sym)
    _check_grid(f_hat, sym)
    if dt == 0:
        return s.with_coeffs(s.coeffs.copy())
    expo, weight = sym.factors(dt)
    return s.with_coeffs(expo * s.coeffs + weight * f_hat.coeffs)
