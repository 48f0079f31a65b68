# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

"""Conserved quantities, norm probes and energy-identity residuals.

For the regularized equation

    u_t + b u_x + u_xxx + u_xyy + delta (u_xxxx + u_yyyy)
        + (g_h(u))_x - (a1 u_x)_x - (a2 u_y)_y + a0 u = f

multiplying by 2 u psi(x) and integrating over the strip gives ten groups whose
sum vanishes:

    d/dt int u^2 psi                         time_derivative
    + int (3 u_x^2 + u_y^2) psi'             dispersive_flux
    - int u^2 psi'''                         dispersive_weight
    - b int u^2 psi'                         transport
    + 2 delta int [u_xx (u psi)_xx + u_yy^2 psi]   hyperviscosity
    - 2 int K(u) psi'                        nonlinear
    + 2 int (a1 u_x^2 + a2 u_y^2) psi        damping_gradient
    + 2 int a1 u u_x psi'                    damping_cross
    + 2 int a0 u^2 psi                       absorption
    - 2 int f u psi                          forcing

with K(u) = int_0^u g_h'(s) s ds. psi == 1 recovers the plain L2 identity.
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from zk_strip.apis.diagnostics import DiagnosticRecord, ResidualSeries
from zk_strip.apis.evolution import Coefficients, Trajectory
from zk_strip.apis.spectral import PhysicalField, StripGrid
from zk_strip.apis.weights import WeightKind, WeightSpec

from ..evolution.cutoff import g_h_primitive
from ..spectral.transforms import (
    derivative_coeffs,
    forward_coeffs,
    integrate,
    inverse_coeffs,
    with_walls,
    y_derivative_values,
)
from ..weights.norms import pad_walls, weighted_l2_norm
from ..weights.weight_functions import weight_jet

log = logging.getLogger(__name__)

CONSTANT_WEIGHT = WeightSpec(kind=WeightKind.constant_one)

# seam bands cover this share of the box on each side
SEAM_BAND_FRACTION = 0.05
SEAM_TOLERANCE = 1e-6

WEIGHTED_TERMS = [
    "time_derivative",
    "dispersive_flux",
    "dispersive_weight",
    "transport",
    "hyperviscosity",
    "nonlinear",
    "damping_gradient",
    "damping_cross",
    "absorption",
    "forcing",
]

H1_TERMS = [
    "time_derivative",
    "transport",
    "dispersive_flux",
    "dispersive_weight",
    "hyperviscosity",
    "forcing",
]


class SpectralDerivatives:
    """Lazily evaluated spectral derivatives of one snapshot."""

    def __init__(self, values: np.ndarray, grid: StripGrid):
        self.grid = grid
        self.u = values
        self.coeffs = forward_coeffs(values, grid)
        self._cache: Dict[Tuple[int, int], np.ndarray] = {}

    def __call__(self, order_x: int, order_y: int) -> np.ndarray:
        key = (order_x, order_y)
        if key not in self._cache:
            if order_y % 2 == 1:
                self._cache[key] = y_derivative_values(
                    derivative_coeffs(self.coeffs, self.grid, 0, order_y - 1),
                    self.grid,
                    order_x,
                )
            else:
                self._cache[key] = inverse_coeffs(
                    derivative_coeffs(self.coeffs, self.grid, order_x, order_y), self.grid
                )
        return self._cache[key]


def conserved_quantities(u: PhysicalField) -> Tuple[float, float]:
    """(int u^2, int (u_x^2 + u_y^2) - 1/3 int u^3)."""
    grid = u.grid
    d = SpectralDerivatives(u.values, grid)
    l2_sq = integrate(u.values**2, grid)
    gradient = integrate(pad_walls(d(1, 0) ** 2) + d(0, 1) ** 2, grid)
    cubic = integrate(u.values**3, grid)
    return l2_sq, gradient - cubic / 3.0


def h1_norm(u: PhysicalField) -> float:
    grid = u.grid
    d = SpectralDerivatives(u.values, grid)
    total = integrate(pad_walls(u.values**2 + d(1, 0) ** 2) + d(0, 1) ** 2, grid)
    return float(np.sqrt(total))


def seam_fraction(u: PhysicalField, band: float = SEAM_BAND_FRACTION) -> float:
    """Share of int u^2 within band * box length of either x-edge."""
    grid = u.grid
    x = grid.x
    near = np.minimum(x - grid.x_min, grid.x_max - x) < band * grid.period
    total = integrate(u.values**2, grid)
    if total == 0.0:
        return 0.0
    return integrate(u.values**2 * near[:, None], grid) / total


def evaluate_record(u: PhysicalField, t: float, weights: List[WeightSpec]) -> DiagnosticRecord:
    l2_sq, energy = conserved_quantities(u)
    seam = seam_fraction(u)
    return DiagnosticRecord(
        t=t,
        l2=float(np.sqrt(l2_sq)),
        h1=h1_norm(u),
        energy=energy,
        weighted_l2=[weighted_l2_norm(u, w) for w in weights],
        seam_fraction=seam,
        wraparound=seam > SEAM_TOLERANCE,
        identity_residual_weighted=[None] * len(weights),
    )


def _centered_derivative(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Second-order derivative at interior points of a possibly non-uniform series."""
    h_minus = times[1:-1] - times[:-2]
    h_plus = times[2:] - times[1:-1]
    return (
        h_minus**2 * values[2:]
        - h_plus**2 * values[:-2]
        + (h_plus**2 - h_minus**2) * values[1:-1]
    ) / (h_minus * h_plus * (h_minus + h_plus))


def _check_series(traj: Trajectory):
    if len(traj.snapshots) < 3:
        raise ValueError(
            f"identity residuals need at least 3 snapshots, got {len(traj.snapshots)}"
        )


def _forcing_values(f: Optional[PhysicalField], grid: StripGrid) -> Optional[np.ndarray]:
    if f is None:
        return None
    if f.grid != grid:
        raise ValueError("forcing lives on a different grid than the trajectory")
    return f.values


def weighted_identity_terms(
    u: PhysicalField,
    coeffs: Coefficients,
    w: WeightSpec,
    h_cutoff: float,
    nonlinear: bool = True,
    f: Optional[PhysicalField] = None,
) -> Dict[str, float]:
    """All groups of the weighted identity except the time derivative."""
    grid = u.grid
    psi, dpsi, d2psi, d3psi = (p[:, None] for p in weight_jet(w, grid.x, 3))
    d = SpectralDerivatives(u.values, grid)
    uu = u.values
    ux, uxx, uyy = d(1, 0), d(2, 0), d(0, 2)
    uy = d(0, 1)

    terms = {
        "dispersive_flux": integrate(pad_walls(3.0 * ux**2 * dpsi) + uy**2 * dpsi, grid),
        "dispersive_weight": -integrate(uu**2 * d3psi, grid),
        "transport": -coeffs.b * integrate(uu**2 * dpsi, grid),
    }

    if coeffs.delta:
        upsi_xx = uxx * psi + 2.0 * ux * dpsi + uu * d2psi
        terms["hyperviscosity"] = 2.0 * coeffs.delta * integrate(
            uxx * upsi_xx + uyy**2 * psi, grid
        )
    else:
        terms["hyperviscosity"] = 0.0

    if nonlinear:
        terms["nonlinear"] = -2.0 * integrate(g_h_primitive(uu, h_cutoff) * dpsi, grid)
    else:
        terms["nonlinear"] = 0.0

    a0, a1, a2 = coeffs.a0.values, coeffs.a1.values, coeffs.a2.values
    terms["damping_gradient"] = 2.0 * integrate(
        pad_walls(a1 * ux**2 * psi) + with_walls(a2) * uy**2 * psi, grid
    )
    terms["damping_cross"] = 2.0 * integrate(a1 * uu * ux * dpsi, grid)
    terms["absorption"] = 2.0 * integrate(a0 * uu**2 * psi, grid)

    fv = _forcing_values(f, grid)
    terms["forcing"] = 0.0 if fv is None else -2.0 * integrate(fv * uu * psi, grid)
    return terms


def _residual_series(
    traj: Trajectory,
    functional: Callable[[PhysicalField], float],
    static_terms: Callable[[PhysicalField], Dict[str, float]],
    order: List[str],
) -> ResidualSeries:
    _check_series(traj)
    times = np.asarray(traj.times, dtype=np.float64)
    values = np.array([functional(s) for s in traj.snapshots])
    rates = _centered_derivative(times, values)

    terms: Dict[str, List[float]] = {name: [] for name in order}
    residual: List[float] = []
    for i, snapshot in enumerate(traj.snapshots[1:-1]):
        groups = static_terms(snapshot)
        groups["time_derivative"] = float(rates[i])
        total = 0.0
        for name in order:
            terms[name].append(groups[name])
            total += groups[name]
        residual.append(total)
    return ResidualSeries(times=list(times[1:-1]), residual=residual, terms=terms)


def weighted_identity_residual(
    traj: Trajectory,
    coeffs: Coefficients,
    w: WeightSpec,
    f: Optional[PhysicalField] = None,
) -> ResidualSeries:
    psi_column = None

    def functional(s: PhysicalField) -> float:
        nonlocal psi_column
        if psi_column is None:
            psi_column = weight_jet(w, s.grid.x, 0)[0][:, None]
        return integrate(s.values**2 * psi_column, s.grid)

    def static_terms(s: PhysicalField) -> Dict[str, float]:
        return weighted_identity_terms(s, coeffs, w, traj.h_cutoff, traj.nonlinear, f)

    return _residual_series(traj, functional, static_terms, WEIGHTED_TERMS)


def l2_identity_residual(
    traj: Trajectory,
    coeffs: Coefficients,
    f: Optional[PhysicalField] = None,
) -> ResidualSeries:
    return weighted_identity_residual(traj, coeffs, CONSTANT_WEIGHT, f)


def linear_h1_identity_terms(
    u: PhysicalField,
    coeffs: Coefficients,
    w: WeightSpec,
    f: Optional[PhysicalField] = None,
) -> Dict[str, float]:
    """Static groups of the weighted H1 identity of the undamped linear flow.

    E = int (u_x^2 + u_y^2) psi satisfies
        dE/dt - b int (u_x^2 + u_y^2) psi'
              + int (3 u_xx^2 + 4 u_xy^2 + u_yy^2) psi' - int (u_x^2 + u_y^2) psi'''
              - 2 delta int (u_xxxx + u_yyyy) A + 2 int f A = 0
    with A = (u_x psi)_x + u_yy psi.
    """
    grid = u.grid
    psi, dpsi, _, d3psi = (p[:, None] for p in weight_jet(w, grid.x, 3))
    d = SpectralDerivatives(u.values, grid)
    ux, uxx, uyy = d(1, 0), d(2, 0), d(0, 2)
    uy, uxy = d(0, 1), d(1, 1)
    gradient_sq = pad_walls(ux**2) + uy**2
    A = uxx * psi + ux * dpsi + uyy * psi

    terms = {
        "transport": -coeffs.b * integrate(gradient_sq * dpsi, grid),
        "dispersive_flux": integrate(
            pad_walls((3.0 * uxx**2 + uyy**2) * dpsi) + 4.0 * uxy**2 * dpsi, grid
        ),
        "dispersive_weight": -integrate(gradient_sq * d3psi, grid),
    }
    if coeffs.delta:
        fourth = d(4, 0) + d(0, 4)
        terms["hyperviscosity"] = -2.0 * coeffs.delta * integrate(fourth * A, grid)
    else:
        terms["hyperviscosity"] = 0.0
    fv = _forcing_values(f, grid)
    terms["forcing"] = 0.0 if fv is None else 2.0 * integrate(fv * A, grid)
    return terms


def linear_h1_identity_residual(
    traj: Trajectory,
    coeffs: Coefficients,
    w: WeightSpec,
    f: Optional[PhysicalField] = None,
) -> ResidualSeries:
    if traj.nonlinear or coeffs.has_damping:
        raise ValueError(
            "the H1 identity residual applies to undamped runs with the nonlinearity disabled"
        )

    def functional(s: PhysicalField) -> float:
        d = SpectralDerivatives(s.values, s.grid)
        psi = weight_jet(w, s.grid.x, 0)[0][:, None]
        return integrate((pad_walls(d(1, 0) ** 2) + d(0, 1) ** 2) * psi, s.grid)

    def static_terms(s: PhysicalField) -> Dict[str, float]:
        return linear_h1_identity_terms(s, coeffs, w, f)

    return _residual_series(traj, functional, static_terms, H1_TERMS)


def attach_residuals(
    traj: Trajectory,
    coeffs: Coefficients,
    f: Optional[PhysicalField] = None,
) -> Trajectory:
    """Fill the residual fields of the interior diagnostic records in place."""
    if len(traj.snapshots) < 3:
        log.warning("fewer than 3 snapshots, identity residuals left empty")
        return traj
    series = l2_identity_residual(traj, coeffs, f)
    for record, value in zip(traj.diagnostics[1:-1], series.residual):
        record.identity_residual_l2 = value
    wrapped = [r.t for r in traj.diagnostics if r.wraparound]
    if wrapped and any(w.kind != WeightKind.constant_one for w in traj.weights):
        log.warning(
            f"field mass reached the x-seam from t={wrapped[0]:.4g}; "
            f"weighted identity residuals of flagged records are not meaningful"
        )
    for j, w in enumerate(traj.weights):
        weighted = weighted_identity_residual(traj, coeffs, w, f)
        for record, value in zip(traj.diagnostics[1:-1], weighted.residual):
            record.identity_residual_weighted[j] = value
    return traj
