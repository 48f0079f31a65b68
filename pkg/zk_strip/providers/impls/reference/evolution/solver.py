# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import logging
import math
from typing import Optional

import numpy as np

from zk_strip.apis.evolution import (
    BlowUpError,
    Coefficients,
    DiagnosticProbes,
    RunStatus,
    SolverConfig,
    Trajectory,
)
from zk_strip.apis.spectral import PhysicalField, StripGrid
from zk_strip.providers.utils.telemetry import tracing

from ..propagator.propagator import build_symbol, LinearSymbol
from ..spectral.transforms import (
    dealias_mask,
    forward_coeffs,
    inverse_coeffs,
    spectral_norm_sq,
    with_walls,
    x_derivative_factor,
    y_derivative_values,
    y_flux_divergence,
)
from .cutoff import g_h

log = logging.getLogger(__name__)


def _nonzero(field: PhysicalField) -> Optional[np.ndarray]:
    return field.values if np.any(field.values != 0) else None


class NonlinearOperator:
    """Spectral right-hand side -(g_h(u))_x + (a1 u_x)_x + (a2 u_y)_y - a0 u + f."""

    def __init__(
        self,
        coeffs: Coefficients,
        h_cutoff: float,
        use_dealiasing: bool = True,
        nonlinear: bool = True,
        forcing: Optional[PhysicalField] = None,
    ):
        grid = coeffs.grid
        self.grid = grid
        self.h_cutoff = h_cutoff
        self.nonlinear = nonlinear
        self.mask = dealias_mask(grid) if use_dealiasing else None
        self.ikx = x_derivative_factor(grid, 1)[:, None]
        self.a0 = _nonzero(coeffs.a0)
        self.a1 = _nonzero(coeffs.a1)
        a2 = _nonzero(coeffs.a2)
        self.a2_walls = with_walls(a2) if a2 is not None else None
        if forcing is not None and forcing.grid != grid:
            raise ValueError("forcing lives on a different grid than the coefficients")
        self.f_hat = None
        if forcing is not None and np.any(forcing.values != 0):
            self.f_hat = forward_coeffs(forcing.values, grid)

    @property
    def is_zero(self) -> bool:
        return (
            not self.nonlinear
            and self.a0 is None
            and self.a1 is None
            and self.a2_walls is None
        )

    def __call__(self, c: np.ndarray) -> np.ndarray:
        grid = self.grid
        out = np.zeros_like(c)
        if self.nonlinear:
            cu = c * self.mask if self.mask is not None else c
            flux = forward_coeffs(g_h(inverse_coeffs(cu, grid), self.h_cutoff), grid)
            if self.mask is not None:
                flux *= self.mask
            out -= self.ikx * flux
        if self.a1 is not None:
            ux = inverse_coeffs(self.ikx * c, grid)
            out += self.ikx * forward_coeffs(self.a1 * ux, grid)
        if self.a2_walls is not None:
            out += y_flux_divergence(self.a2_walls * y_derivative_values(c, grid), grid)
        if self.a0 is not None:
            out -= forward_coeffs(self.a0 * inverse_coeffs(c, grid), grid)
        if self.f_hat is not None:
            out += self.f_hat
        return out


class StrangSplittingSolver:
    """Exact linear half steps around an RK4 step of the remaining terms.

    Without nonlinearity and damping the forced linear equation is advanced
    with exact Duhamel steps instead.
    """

    def __init__(
        self,
        coeffs: Coefficients,
        cfg: SolverConfig,
        forcing: Optional[PhysicalField] = None,
        symbol: Optional[LinearSymbol] = None,
    ):
        self.grid: StripGrid = coeffs.grid
        self.coeffs = coeffs
        self.cfg = cfg
        self.symbol = symbol or build_symbol(self.grid, coeffs.b, coeffs.delta)
        if self.symbol.grid != self.grid:
            raise ValueError("symbol and coefficients live on different grids")
        self.operator = NonlinearOperator(
            coeffs,
            cfg.h_cutoff,
            use_dealiasing=cfg.use_dealiasing,
            nonlinear=cfg.nonlinear,
            forcing=forcing,
        )
        self.linear_only = self.operator.is_zero

    def step_coeffs(self, c: np.ndarray) -> np.ndarray:
        dt = self.cfg.dt
        if self.linear_only:
            expo, weight = self.symbol.factors(dt)
            out = expo * c
            if self.operator.f_hat is not None:
                out += weight * self.operator.f_hat
            return out

        half, _ = self.symbol.factors(dt / 2.0)
        c = half * c
        N = self.operator
        k1 = N(c)
        k2 = N(c + 0.5 * dt * k1)
        k3 = N(c + 0.5 * dt * k2)
        k4 = N(c + dt * k3)
        c = c + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return half * c

    def check_state(self, c: np.ndarray, t: float, reference: float):
        norm_sq = spectral_norm_sq(c, self.grid)
        if not math.isfinite(norm_sq):
            raise BlowUpError(t, norm_sq, f"non-finite state at t={t:.6g}")
        norm = math.sqrt(norm_sq)
        if norm > self.cfg.blowup_factor * reference:
            raise BlowUpError(t, norm)

    def run(
        self,
        u0: PhysicalField,
        probes: Optional[DiagnosticProbes] = None,
        forcing: Optional[PhysicalField] = None,
    ) -> Trajectory:
        if u0.grid != self.grid:
            raise ValueError("initial data lives on a different grid than the coefficients")
        # diagnostics depends on the cutoff in this package
        from ..diagnostics.diagnostics import attach_residuals, evaluate_record

        probes = probes or DiagnosticProbes()
        cfg = self.cfg
        traj = Trajectory(
            weights=list(probes.weights),
            nonlinear=cfg.nonlinear,
            h_cutoff=cfg.h_cutoff,
        )

        def record(c: np.ndarray, t: float):
            snapshot = PhysicalField(grid=self.grid, values=inverse_coeffs(c, self.grid))
            traj.times.append(t)
            traj.snapshots.append(snapshot)
            traj.diagnostics.append(evaluate_record(snapshot, t, probes.weights))

        c = forward_coeffs(u0.values, self.grid)
        initial = math.sqrt(spectral_norm_sq(c, self.grid))
        # zero data has no scale of its own; measure growth in absolute terms
        reference = initial if initial > 0 else 1.0
        record(c, 0.0)

        n_steps = cfg.n_steps
        with tracing.span("run", {"steps": n_steps, "grid": f"{self.grid.nx}x{self.grid.ny}"}):
            for n in range(1, n_steps + 1):
                t = n * cfg.dt
                try:
                    c = self.step_coeffs(c)
                    self.check_state(c, t, reference)
                except BlowUpError as e:
                    log.warning(f"run aborted: {e}")
                    traj.status = RunStatus.blew_up
                    traj.failure_time = e.t
                    traj.message = str(e)
                    break
                if n % cfg.snapshot_every == 0 or n == n_steps:
                    record(c, t)
                    log.debug(f"t={t:.4f} l2={traj.diagnostics[-1].l2:.6e}")

            if probes.residuals and len(traj.snapshots) >= 3:
                with tracing.span("residuals"):
                    attach_residuals(traj, self.coeffs, forcing)
        return traj


def nonlinear_rhs(
    u: PhysicalField,
    coeffs: Coefficients,
    h: float,
    f: Optional[PhysicalField] = None,
    use_dealiasing: bool = True,
    t: float = 0.0,
) -> PhysicalField:
    if u.grid != coeffs.grid:
        raise ValueError("field and coefficients live on different grids")
    operator = NonlinearOperator(coeffs, h, use_dealiasing=use_dealiasing, forcing=f)
    values = inverse_coeffs(operator(forward_coeffs(u.values, u.grid)), u.grid)
    if not np.all(np.isfinite(values)):
        raise BlowUpError(t, float("nan"), f"non-finite nonlinear term at t={t:.6g}")
    return PhysicalField(grid=u.grid, values=values)


def step(
    u: PhysicalField,
    sym: LinearSymbol,
    coeffs: Coefficients,
    cfg: SolverConfig,
    f: Optional[PhysicalField] = None,
) -> PhysicalField:
    solver = StrangSplittingSolver(coeffs, cfg, forcing=f, symbol=sym)
    c = forward_coeffs(u.values, u.grid)
    reference = math.sqrt(spectral_norm_sq(c, u.grid)) or 1.0
    c = solver.step_coeffs(c)
    solver.check_state(c, cfg.dt, reference)
    return PhysicalField(grid=u.grid, values=inverse_coeffs(c, u.grid))


def run(
    u0: PhysicalField,
    f: Optional[PhysicalField],
    coeffs: Coefficients,
    cfg: SolverConfig,
    probes: Optional[DiagnosticProbes] = None,
) -> Trajectory:
    solver = StrangSplittingSolver(coeffs, cfg, forcing=f)
    log.info(
        f"running {cfg.n_steps} steps of dt={cfg.dt:g} "
        f"({'Duhamel' if solver.linear_only else 'Strang'}, b={coeffs.b:g}, delta={coeffs.delta:g})"
    )
    return solver.run(u0, probes, forcing=f)
