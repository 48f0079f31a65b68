# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

# End-to-end acceptance runs. The long ones carry the `slow` marker:
#
# ```bash
# pytest -s tests/test_e2e.py --tb=short            # everything
# pytest -s tests/test_e2e.py -m "not slow"         # quick subset
# ```

import csv
import math
from pathlib import Path

import numpy as np
import pytest

from zk_strip.apis.evolution import DampingPreset, DiagnosticProbes, InitialPreset, SolverConfig
from zk_strip.apis.scenarios import Scenario, ScenarioKind, ScenarioParams
from zk_strip.apis.spectral import PhysicalField, StripGrid
from zk_strip.apis.weights import InterpolationCase, WeightKind, WeightSpec
from zk_strip.cli.zk import main
from zk_strip.distribution.runner import ExitCode
from zk_strip.providers.impls.reference.diagnostics import (
    l2_identity_residual,
    weighted_identity_residual,
)
from zk_strip.providers.impls.reference.evolution import (
    damping_coefficients,
    g_h,
    g_h_prime,
    initial_condition,
    run,
)
from zk_strip.providers.impls.reference.propagator import apply_propagator, build_symbol
from zk_strip.providers.impls.reference.scenarios import (
    locate_amplitude_threshold,
    rate_scaling_study,
    run_scenario,
)
from zk_strip.providers.impls.reference.spectral import forward_transform
from zk_strip.providers.impls.reference.weights import interpolation_check, steklov_check
from zk_strip.providers.tests.fixtures import bump

TEMPLATES_DIR = Path(__file__).parents[1] / "zk_strip" / "distribution" / "templates"
ONE = WeightSpec(kind=WeightKind.constant_one)


def wide_grid(nx: int = 128, ny: int = 8, width_L: float = math.pi) -> StripGrid:
    return StripGrid(x_min=-20.0, x_max=20.0, nx=nx, width_L=width_L, ny=ny)


def run_cli(argv) -> int:
    with pytest.raises(SystemExit) as e:
        main(argv)
    return e.value.code


def csv_columns(path: Path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    header, body = rows[0], rows[1:]
    return {name: [float(r[i]) if r[i] else None for r in body] for i, name in enumerate(header)}


def relative_range(values) -> float:
    values = np.asarray(values)
    return float(np.ptp(values) / abs(values[0]))


@pytest.mark.slow
def test_pure_zk_conserves_l2_and_energy(tmp_path):
    out = tmp_path / "conservation"
    code = run_cli(["run", str(TEMPLATES_DIR / "conservation.cfg"), "--output-dir", str(out), "--quiet"])
    assert code == 0
    columns = csv_columns(out / "diagnostics.csv")
    assert columns["t"][-1] == pytest.approx(1.0)
    assert relative_range(columns["l2"]) < 1e-6
    assert relative_range(columns["energy"]) < 1e-4


def test_linear_absorption_rate():
    grid = wide_grid()
    cfg = SolverConfig(dt=1e-2, t_end=2.0, snapshot_every=10)
    params = ScenarioParams(beta0=0.5, amplitude=1e-6)
    _, report = run_scenario(Scenario(kind=ScenarioKind.C1_absorption, params=params), grid, cfg)
    assert report.fitted_rate == pytest.approx(0.5, abs=1e-3)
    assert report.prefactor_used == 1.0
    assert report.bound_holds

    params = params.model_copy(update={"amplitude": 0.1})
    _, report = run_scenario(Scenario(kind=ScenarioKind.C1_absorption, params=params), grid, cfg)
    assert report.bound_holds


def test_transverse_dissipation_rate():
    c, L = 0.5, 2.0
    grid = wide_grid(width_L=L)
    cfg = SolverConfig(dt=1e-2, t_end=2.0, snapshot_every=10, nonlinear=False)
    params = ScenarioParams(beta2=c)
    _, report = run_scenario(Scenario(kind=ScenarioKind.C1_absorption, params=params), grid, cfg)
    expected = math.pi**2 * c / L**2
    assert report.fitted_rate == pytest.approx(expected, rel=5e-3)
    assert report.beta_used == pytest.approx(expected)
    assert report.bound_holds


def test_propagator_matches_modal_rk4():
    grid = StripGrid(x_min=-math.pi, x_max=math.pi, nx=16, width_L=math.pi, ny=4)
    rng = np.random.default_rng(42)
    s = forward_transform(PhysicalField(grid=grid, values=rng.standard_normal(grid.shape)))
    sym = build_symbol(grid, b=1.0, delta=0.1)

    exact = apply_propagator(s, sym, 1.0).coeffs
    c, dt = s.coeffs.copy(), 1e-4
    for _ in range(10000):
        k1 = sym.table * c
        k2 = sym.table * (c + 0.5 * dt * k1)
        k3 = sym.table * (c + 0.5 * dt * k2)
        k4 = sym.table * (c + dt * k3)
        c = c + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    assert np.max(np.abs(c - exact)) <= 1e-8 * np.max(np.abs(exact))

    twice = apply_propagator(apply_propagator(s, sym, 0.4), sym, 0.6).coeffs
    assert np.max(np.abs(twice - exact)) <= 1e-13 * np.max(np.abs(exact))


@pytest.mark.slow
def test_identity_residuals_converge_at_second_order():
    grid = wide_grid(nx=128, ny=8)
    coeffs = damping_coefficients(grid, DampingPreset.constant, delta=1e-2, a=0.3, absorption=0.1)
    u0 = initial_condition(grid, InitialPreset.gaussian, amplitude=0.2, width=2.0)
    weight = WeightSpec(kind=WeightKind.exp_plus, alpha=0.1)

    residuals = []
    for dt in (1e-2, 5e-3):
        cfg = SolverConfig(dt=dt, t_end=0.4, snapshot_every=2)
        traj = run(u0, None, coeffs, cfg, DiagnosticProbes(residuals=False))
        residuals.append(
            (
                l2_identity_residual(traj, coeffs).max_abs,
                weighted_identity_residual(traj, coeffs, weight).max_abs,
            )
        )
    (l2_coarse, w_coarse), (l2_fine, w_fine) = residuals
    assert math.log2(l2_coarse / l2_fine) >= 1.9
    assert math.log2(w_coarse / w_fine) >= 1.9


def test_steklov_sharpness():
    rng = np.random.default_rng(0)
    for L in (math.pi / 2, math.pi, 2 * math.pi):
        n = 24
        y = L * np.arange(1, n + 1) / (n + 1)
        sharp = L**2 / math.pi**2
        assert steklov_check(np.sin(math.pi * y / L), L) == pytest.approx(sharp, rel=1e-12)
        worst = max(steklov_check(rng.standard_normal(n), L) for _ in range(1000))
        assert worst <= sharp * (1 + 1e-12)


@pytest.mark.parametrize("h", [0.05, 0.1, 0.5])
def test_cutoff_contract(h):
    u = np.linspace(-5.0 / h, 5.0 / h, 200001)
    inner = np.abs(u) <= 1.0 / h
    np.testing.assert_array_equal(g_h(u[inner], h), 0.5 * u[inner] ** 2)
    gp = np.abs(g_h_prime(u, h))
    assert gp.max() <= 2.0 / h * (1 + 1e-12)
    assert np.all(gp <= 2.0 * np.abs(u) * (1 + 1e-12))


@pytest.mark.slow
def test_plateau_damping_small_data_decay():
    grid = wide_grid(nx=128, ny=8)
    cfg = SolverConfig(dt=1e-2, t_end=4.0, snapshot_every=10)
    params = ScenarioParams(a=1.0, R=5.0, center=-12.5, width=2.5)
    scenario = Scenario(kind=ScenarioKind.C2_both_infinities, params=params)

    amplitude, report = locate_amplitude_threshold(scenario, grid, cfg, low=0.01, high=1.0, iterations=3)
    assert 0.01 <= amplitude <= 1.0
    assert report.prefactor_used == pytest.approx(math.sqrt(2.0))
    assert report.beta_used > 0
    assert report.bound_holds
    assert report.fit_r2 > 0.99
    assert report.l2_monotone


@pytest.mark.slow
def test_weighted_rate_scaling():
    grid = wide_grid(nx=256, ny=8)
    cfg = SolverConfig(dt=1e-2, t_end=2.0, snapshot_every=10)
    params = ScenarioParams(center=5.0, width=2.5)
    table = rate_scaling_study(
        ScenarioKind.C3_exp_weight_no_damping,
        [0.05, 0.1, 0.2],
        [math.pi / 2, math.pi, 2 * math.pi],
        grid,
        cfg,
        params=params,
        reference_alpha=0.1,
        reference_L=math.pi,
    )
    assert len(table.rows) == 5
    assert all(r.fitted_rate is not None and r.fitted_rate > 0 for r in table.rows)
    assert table.alpha_trend.slope > 0 and table.alpha_trend.r2 > 0.95
    assert table.width_trend.slope > 0 and table.width_trend.r2 > 0.9


def _interpolation_constant(grid: StripGrid, seed: int = 5, samples: int = 100) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        f = bump(
            grid,
            amplitude=rng.uniform(0.5, 2.0),
            center=rng.uniform(-3.0, 3.0),
            width=rng.uniform(0.5, 2.0),
            mode=int(rng.integers(1, 4)),
        )
        sides = interpolation_check(f, InterpolationCase.k1m0q, ONE, ONE, 4.0)
        worst = max(worst, sides.ratio)
    return worst


def test_interpolation_constant_is_stable():
    def grid(nx, ny, L=math.pi):
        return StripGrid(x_min=-10.0, x_max=10.0, nx=nx, width_L=L, ny=ny)

    coarse = _interpolation_constant(grid(128, 16))
    fine = _interpolation_constant(grid(256, 32))
    assert 0 < coarse < 1
    assert fine == pytest.approx(coarse, rel=0.2)

    per_width = [_interpolation_constant(grid(128, 16, L)) for L in (math.pi / 2, math.pi, 2 * math.pi)]
    assert max(per_width) / min(per_width) < 1.5


def test_runs_are_reproducible_and_continuous(tmp_path):
    config = tmp_path / "plateau.cfg"
    config.write_text(
        "name = repro\n"
        "[grid]\nx_min = -12\nx_max = 12\nnx = 64\nwidth_L = pi\nny = 8\n"
        "[physics]\ndelta = 0\n"
        "[time]\ndt = 1e-2\nt_end = 0.5\nsnapshot_every = 5\n"
        "[scenario]\nkind = C2_both_infinities\nparams.a = 1\nparams.R = 5\nparams.center = -8\n"
    )
    first, second = tmp_path / "a", tmp_path / "b"
    assert run_cli(["scenario", str(config), "--output-dir", str(first), "--quiet"]) == ExitCode.success
    assert run_cli(["scenario", str(config), "--output-dir", str(second), "--quiet"]) == ExitCode.success
    assert (first / "diagnostics.csv").read_bytes() == (second / "diagnostics.csv").read_bytes()

    grid = wide_grid(nx=64, ny=8)
    coeffs = damping_coefficients(grid, DampingPreset.both_infinities, a=1.0, R=5.0)
    u0 = initial_condition(grid, InitialPreset.gaussian, amplitude=0.3)
    noise = np.random.default_rng(1).standard_normal(grid.shape)
    perturbed = PhysicalField(grid=grid, values=u0.values + 1e-10 * noise)
    cfg = SolverConfig(dt=1e-2, t_end=1.0, snapshot_every=100)
    probes = DiagnosticProbes(residuals=False)
    a = run(u0, None, coeffs, cfg, probes).diagnostics[-1].l2
    b = run(perturbed, None, coeffs, cfg, probes).diagnostics[-1].l2
    assert abs(a - b) < 1e-6
