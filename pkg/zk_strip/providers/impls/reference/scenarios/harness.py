# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from zk_strip.apis.evolution import (
    Coefficients,
    DampingPreset,
    DiagnosticProbes,
    InitialPreset,
    RunStatus,
    SolverConfig,
    Trajectory,
)
from zk_strip.apis.scenarios import (
    BetaSource,
    DecayReport,
    RateScalingRow,
    RateScalingTable,
    Scenario,
    ScenarioKind,
    ScenarioParams,
    TrendFit,
)
from zk_strip.apis.spectral import PhysicalField, SpectralField, StripGrid
from zk_strip.apis.weights import WeightSpec
from zk_strip.providers.utils.telemetry import tracing

from ..evolution.presets import damping_coefficients, initial_condition
from ..evolution.solver import run
from ..spectral.transforms import forward_coeffs, integrate, inverse_coeffs, translate

log = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-6
DISCARD_FRACTION = 0.1
MONOTONE_TOLERANCE = 1e-8
# C2-C5 bounds are checked at this fraction of the fitted rate, capped by
# the largest rate the observed envelope admits
FITTED_RATE_FRACTION = 0.5

_PLATEAU_PRESETS = {
    ScenarioKind.C2_both_infinities: DampingPreset.both_infinities,
    ScenarioKind.C4_minus_infinity: DampingPreset.minus_infinity,
    ScenarioKind.C5_plus_infinity: DampingPreset.plus_infinity,
}


def damping_margin(params: ScenarioParams, width_L: float) -> float:
    """pi^2 beta2 / L^2 + beta0, the largest rate the C1 hypothesis supports."""
    return math.pi**2 * params.beta2 / width_L**2 + params.beta0


def c1_beta(params: ScenarioParams, width_L: float) -> float:
    margin = damping_margin(params, width_L)
    beta = params.beta if params.beta is not None else margin
    if beta <= 0:
        raise ValueError("C1 needs beta0 > 0 or beta2 > 0 to support a positive rate")
    if beta > margin * (1 + 1e-12):
        raise ValueError(
            f"beta={beta:g} exceeds the damping margin pi^2*beta2/L^2 + beta0 = {margin:g}"
        )
    return beta


def _initial_bump(params: ScenarioParams, grid: StripGrid) -> PhysicalField:
    u0 = initial_condition(
        grid,
        InitialPreset.gaussian,
        amplitude=1.0,
        center=params.center,
        width=params.width,
    )
    norm = math.sqrt(integrate(u0.values**2, grid))
    return PhysicalField(grid=grid, values=u0.values * (params.amplitude / norm))


def build_scenario(
    s: Scenario, grid: StripGrid, delta: float = 0.0, b: float = 0.0
) -> Tuple[Coefficients, PhysicalField, WeightSpec]:
    p = s.params
    if s.kind == ScenarioKind.C1_absorption:
        c1_beta(p, grid.width_L)
        coeffs = Coefficients(
            b=b,
            delta=delta,
            a0=PhysicalField(grid=grid, values=np.full(grid.shape, p.beta0)),
            a1=PhysicalField.zeros(grid),
            a2=PhysicalField(grid=grid, values=np.full(grid.shape, p.beta2)),
        )
    elif s.kind == ScenarioKind.C3_exp_weight_no_damping:
        coeffs = damping_coefficients(
            grid,
            DampingPreset.none,
            b=b,
            delta=delta,
            sponge_strength=p.sponge_strength,
            sponge_width=p.sponge_width,
        )
    else:
        coeffs = damping_coefficients(
            grid,
            _PLATEAU_PRESETS[s.kind],
            b=b,
            delta=delta,
            a=p.a,
            R=p.R,
            width=p.plateau_width,
        )
    if np.any(coeffs.a0.values < 0):
        raise ValueError("a0 must be non-negative for the decay scenarios")
    return coeffs, _initial_bump(p, grid), s.weight


def fit_decay_rate(times: Sequence[float], norms: Sequence[float]) -> Tuple[float, float]:
    """(beta, r^2) of the least-squares fit log |u(t)| ~ log C - beta t."""
    times = np.asarray(times, dtype=np.float64)
    norms = np.asarray(norms, dtype=np.float64)
    if times.size < 5:
        raise ValueError(f"rate fit needs at least 5 samples, got {times.size}")
    if np.any(norms <= 0):
        raise ValueError("rate fit needs strictly positive norms")
    logs = np.log(norms)
    if np.ptp(logs) == 0:
        return 0.0, 1.0
    fit = stats.linregress(times, logs)
    return float(-fit.slope), float(fit.rvalue**2)


def _fit_window(times: np.ndarray, norms: np.ndarray, discard: float):
    keep = times >= times[0] + discard * (times[-1] - times[0])
    if keep.sum() < 5 or np.any(norms[keep] <= 0):
        return None, None
    return fit_decay_rate(times[keep], norms[keep])


def admissible_rate(times: Sequence[float], norms: Sequence[float], prefactor: float) -> float:
    """Largest beta >= 0 with norms[i] <= prefactor e^{-beta t_i} norms[0] at every sample."""
    times = np.asarray(times, dtype=np.float64)
    norms = np.asarray(norms, dtype=np.float64)
    n0 = norms[0]
    if n0 <= 0:
        return 0.0
    later = times > times[0]
    if not np.any(later):
        return 0.0
    with np.errstate(divide="ignore"):
        rates = np.log(prefactor * n0 / norms[later]) / (times[later] - times[0])
    return max(float(np.min(rates)), 0.0)


def verify_bound(
    traj: Trajectory,
    w: WeightSpec,
    beta: float,
    prefactor: float,
    tolerance: float = DEFAULT_TOLERANCE,
    discard_fraction: float = DISCARD_FRACTION,
) -> DecayReport:
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    index = traj.weight_index(w)
    times = np.asarray([r.t for r in traj.diagnostics])
    norms = np.asarray([r.weighted_l2[index] for r in traj.diagnostics])
    n0 = norms[0]
    envelope = prefactor * np.exp(-beta * times) * n0
    margin = float(np.min(envelope - norms))
    holds = margin >= -tolerance * n0

    fitted, r2 = _fit_window(times, norms, discard_fraction)
    observed = float(np.max(norms * np.exp(beta * times)) / n0) if n0 > 0 else None

    l2 = np.asarray([r.l2 for r in traj.diagnostics])
    monotone = bool(np.all(np.diff(l2) <= MONOTONE_TOLERANCE * max(l2[0], 1e-300)))

    return DecayReport(
        weight=w,
        fitted_rate=fitted,
        fit_r2=r2,
        bound_holds=bool(holds) and traj.status == RunStatus.completed,
        bound_margin=margin,
        prefactor_used=prefactor,
        beta_used=beta,
        tolerance=tolerance,
        observed_prefactor=observed,
        discarded_fraction=discard_fraction,
        l2_monotone=monotone,
        blew_up=traj.status == RunStatus.blew_up,
    )


def _prefactor(kind: ScenarioKind) -> float:
    return math.sqrt(2.0) if kind == ScenarioKind.C2_both_infinities else 1.0


def run_scenario(
    s: Scenario,
    grid: StripGrid,
    cfg: SolverConfig,
    delta: float = 0.0,
    b: float = 0.0,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Tuple[Trajectory, DecayReport]:
    coeffs, u0, w = build_scenario(s, grid, delta=delta, b=b)
    with tracing.span("scenario", {"kind": s.kind.value, "amplitude": s.params.amplitude}):
        traj = run(u0, None, coeffs, cfg, DiagnosticProbes(weights=[w], residuals=False))

    if s.kind == ScenarioKind.C1_absorption:
        beta = c1_beta(s.params, grid.width_L)
        source = BetaSource.damping_margin
    else:
        times = np.asarray(traj.times)
        norms = np.asarray([r.weighted_l2[0] for r in traj.diagnostics])
        fitted, _ = _fit_window(times, norms, DISCARD_FRACTION)
        beta = max(FITTED_RATE_FRACTION * fitted, 0.0) if fitted is not None else 0.0
        beta = min(beta, admissible_rate(times, norms, _prefactor(s.kind)))
        source = BetaSource.trajectory_envelope

    report = verify_bound(traj, w, beta, _prefactor(s.kind), tolerance)
    report.scenario = s.kind
    report.beta_source = source
    report.amplitude = s.params.amplitude
    log.info(
        f"{s.kind.value}: beta={beta:.4g} ({source.value}) fitted={report.fitted_rate} "
        f"bound_holds={report.bound_holds}"
    )
    return traj, report


def _passes(report: DecayReport) -> bool:
    return (
        report.bound_holds
        and not report.blew_up
        and report.fitted_rate is not None
        and report.fitted_rate > 0
        and report.beta_used > 0
    )


def locate_amplitude_threshold(
    s: Scenario,
    grid: StripGrid,
    cfg: SolverConfig,
    low: float,
    high: float,
    iterations: int = 6,
    delta: float = 0.0,
) -> Tuple[float, DecayReport]:
    """Bisection for the largest amplitude whose decay report passes."""
    if not 0 < low < high:
        raise ValueError(f"need 0 < low < high, got ({low}, {high})")

    def attempt(amplitude: float) -> DecayReport:
        candidate = s.model_copy(
            update={"params": s.params.model_copy(update={"amplitude": amplitude})}
        )
        return run_scenario(candidate, grid, cfg, delta=delta)[1]

    best = attempt(low)
    if not _passes(best):
        raise ValueError(f"decay fails already at the lower amplitude {low}")
    top = attempt(high)
    if _passes(top):
        return high, top
    for _ in range(iterations):
        mid = math.sqrt(low * high)
        report = attempt(mid)
        if _passes(report):
            low, best = mid, report
        else:
            high = mid
    log.info(f"empirical amplitude threshold in [{low:.4g}, {high:.4g}]")
    return low, best


def b_reduction_error(
    u0: PhysicalField,
    coeffs: Coefficients,
    cfg: SolverConfig,
) -> float:
    """Relative gap between the run with travel b and the b = 0 run shifted by -b t."""
    moving = run(u0, None, coeffs, cfg, DiagnosticProbes(residuals=False))
    still = run(
        u0,
        None,
        coeffs.model_copy(update={"b": 0.0}),
        cfg,
        DiagnosticProbes(residuals=False),
    )
    grid = u0.grid
    worst = 0.0
    for t, a, c in zip(moving.times, moving.snapshots, still.snapshots):
        spectral = SpectralField(grid=grid, coeffs=forward_coeffs(c.values, grid))
        shifted = inverse_coeffs(translate(spectral, -coeffs.b * t).coeffs, grid)
        scale = max(float(np.max(np.abs(c.values))), 1e-300)
        worst = max(worst, float(np.max(np.abs(a.values - shifted))) / scale)
    return worst


def _trend(variable: str, x: Sequence[float], y: Sequence[Optional[float]]) -> Optional[TrendFit]:
    pairs = [(a, b) for a, b in zip(x, y) if b is not None]
    if len({a for a, _ in pairs}) < 2:
        return None
    xs, ys = zip(*pairs)
    fit = stats.linregress(xs, ys)
    return TrendFit(
        variable=variable,
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r2=float(fit.rvalue**2),
    )


def rate_scaling_study(
    kind: ScenarioKind,
    alphas: List[float],
    L_values: List[float],
    grid: StripGrid,
    cfg: SolverConfig,
    params: Optional[ScenarioParams] = None,
    reference_alpha: Optional[float] = None,
    reference_L: Optional[float] = None,
    max_workers: Optional[int] = None,
) -> RateScalingTable:
    """Fitted rates over an alpha sweep at reference_L and an L sweep at reference_alpha."""
    if kind not in (
        ScenarioKind.C3_exp_weight_no_damping,
        ScenarioKind.C4_minus_infinity,
        ScenarioKind.C5_plus_infinity,
    ):
        raise ValueError(f"rate scaling applies to weighted scenarios C3-C5, got {kind.value}")
    if not alphas or not L_values:
        raise ValueError("need at least one alpha and one L")
    params = params or ScenarioParams()
    ref_alpha = reference_alpha if reference_alpha is not None else alphas[0]
    ref_L = reference_L if reference_L is not None else L_values[0]

    pairs = [(a, ref_L) for a in alphas] + [(ref_alpha, L) for L in L_values]
    pairs = list(dict.fromkeys(pairs))

    def one(pair: Tuple[float, float]) -> RateScalingRow:
        alpha, L = pair
        scenario = Scenario(kind=kind, params=params.model_copy(update={"alpha": alpha}))
        g = grid.model_copy(update={"width_L": L})
        traj, report = run_scenario(scenario, g, cfg)
        return RateScalingRow(
            alpha=alpha, width_L=L, fitted_rate=report.fitted_rate, fit_r2=report.fit_r2
        )

    with tracing.span("rate_scaling_study", {"runs": len(pairs)}):
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(one, pairs))

    alpha_rows = [r for r in rows if r.width_L == ref_L and r.alpha in alphas]
    width_rows = [r for r in rows if r.alpha == ref_alpha and r.width_L in L_values]
    return RateScalingTable(
        kind=kind,
        rows=rows,
        alpha_trend=_trend("alpha", [r.alpha for r in alpha_rows], [r.fitted_rate for r in alpha_rows]),
        width_trend=_trend(
            "L^-2",
            [r.width_L**-2 for r in width_rows],
            [r.fitted_rate for r in width_rows],
        ),
    )
