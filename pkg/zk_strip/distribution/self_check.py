# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

"""Fast invariant suite behind `zk check`."""

import math
from typing import Callable, List, Tuple

import numpy as np
from pydantic import BaseModel

from zk_strip.apis.spectral import PhysicalField, StripGrid
from zk_strip.apis.weights import WeightKind, WeightSpec
from zk_strip.providers.impls.reference.diagnostics.diagnostics import SpectralDerivatives
from zk_strip.providers.impls.reference.evolution.cutoff import g_h, g_h_prime
from zk_strip.providers.impls.reference.propagator import apply_propagator, build_symbol
from zk_strip.providers.impls.reference.spectral import (
    forward_transform,
    integrate,
    inverse_transform,
    spectral_norm_sq,
)
from zk_strip.providers.impls.reference.weights import (
    admissibility_constant,
    documented_admissibility_constant,
    eval_weight,
    steklov_check,
)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str


def _grid() -> StripGrid:
    return StripGrid(x_min=-8.0, x_max=8.0, nx=64, width_L=math.pi, ny=12)


def _random_field(grid: StripGrid, seed: int = 7) -> PhysicalField:
    rng = np.random.default_rng(seed)
    return PhysicalField(grid=grid, values=rng.standard_normal(grid.shape))


def check_round_trip() -> Tuple[bool, str]:
    f = _random_field(_grid())
    back = inverse_transform(forward_transform(f)).values
    err = np.max(np.abs(back - f.values)) / np.max(np.abs(f.values))
    return err <= 1e-12, f"relative error {err:.2e}"


def check_parseval() -> Tuple[bool, str]:
    grid = _grid()
    f = _random_field(grid)
    physical = integrate(f.values**2, grid)
    spectral = spectral_norm_sq(forward_transform(f).coeffs, grid)
    err = abs(physical - spectral) / physical
    return err <= 1e-12, f"relative mismatch {err:.2e}"


def check_steklov() -> Tuple[bool, str]:
    grid = _grid()
    ratio = steklov_check(np.sin(np.pi * grid.y / grid.width_L), grid.width_L)
    sharp = grid.width_L**2 / np.pi**2
    rng = np.random.default_rng(3)
    worst = max(
        steklov_check(rng.standard_normal(grid.ny), grid.width_L) for _ in range(200)
    )
    ok = abs(ratio - sharp) <= 1e-12 * sharp and worst <= sharp * (1 + 1e-12)
    return ok, f"l=1 ratio {ratio:.15g}, worst random {worst:.6g} <= {sharp:.6g}"


def check_cutoff() -> Tuple[bool, str]:
    for h in (0.05, 0.1, 0.5):
        u = np.linspace(-4.0 / h, 4.0 / h, 20001)
        inner = np.abs(u) <= 1.0 / h
        if not np.array_equal(g_h(u[inner], h), 0.5 * u[inner] ** 2):
            return False, f"g_h differs from u^2/2 below 1/h for h={h}"
        gp = np.abs(g_h_prime(u, h))
        if gp.max() > 2.0 / h * (1 + 1e-12) or np.any(gp > 2.0 * np.abs(u) * (1 + 1e-12)):
            return False, f"derivative bound violated for h={h}"
    return True, "h in {0.05, 0.1, 0.5}"


def check_semigroup() -> Tuple[bool, str]:
    grid = StripGrid(x_min=-math.pi, x_max=math.pi, nx=16, width_L=math.pi, ny=4)
    sym = build_symbol(grid, b=1.0, delta=0.1)
    s = forward_transform(_random_field(grid, seed=11))
    twice = apply_propagator(apply_propagator(s, sym, 0.3), sym, 0.45)
    once = apply_propagator(s, sym, 0.75)
    err = np.max(np.abs(twice.coeffs - once.coeffs)) / np.max(np.abs(once.coeffs))
    return err <= 1e-13, f"relative error {err:.2e}"


def check_weights() -> Tuple[bool, str]:
    x = np.linspace(-30.0, 30.0, 12001)
    specs = [
        WeightSpec(kind=WeightKind.rho_alpha, alpha=0.0),
        WeightSpec(kind=WeightKind.rho_alpha, alpha=0.5),
        WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.0),
        WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.5),
        WeightSpec(kind=WeightKind.exp_plus, alpha=0.2),
        WeightSpec(kind=WeightKind.exp_pure, alpha=0.2),
    ]
    worst = 0.0
    for w in specs:
        if np.any(eval_weight(w, x, 0) <= 0) or np.any(eval_weight(w, x, 1) < 0):
            return False, f"{w.label} is not positive and non-decreasing"
        for order in (1, 2, 3):
            c = admissibility_constant(w, order=order, x_range=(-30.0, 30.0), n_samples=12001)
            if not math.isfinite(c):
                return False, f"sup |psi^({order})| / psi is unbounded for {w.label}"
            if order == 1:
                worst = max(worst, c)
                documented = documented_admissibility_constant(w)
                if documented is not None and c > documented * (1 + 1e-9) + 1e-12:
                    return False, f"{w.label}: sup |psi'| / psi = {c:.6g} above {documented:.6g}"
    return True, f"{len(specs)} weights positive, non-decreasing, sup |psi'| / psi <= {worst:.4g}"


def check_skew_symmetry() -> Tuple[bool, str]:
    grid = StripGrid(x_min=-8.0, x_max=8.0, nx=128, width_L=math.pi, ny=12)
    X, Y = grid.meshgrid()
    u = 0.3 * np.exp(-(X**2)) * np.sin(np.pi * Y / grid.width_L)
    flux = g_h(u, 1.0)
    d = SpectralDerivatives(flux, grid)
    value = integrate(u * d(1, 0), grid)
    scale = integrate(u**2, grid)
    return abs(value) <= 1e-10 * scale, f"int u (g_h(u))_x = {value:.2e}"


CHECKS: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
    ("transform round trip", check_round_trip),
    ("parseval", check_parseval),
    ("steklov sharpness", check_steklov),
    ("cutoff contract", check_cutoff),
    ("propagator semigroup", check_semigroup),
    ("weight admissibility", check_weights),
    ("nonlinear skew symmetry", check_skew_symmetry),
]


def run_checks() -> List[CheckResult]:
    results = []
    for name, fn in CHECKS:
        try:
            passed, detail = fn()
        except Exception as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
    return results
