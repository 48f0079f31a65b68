# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import math
from typing import Optional, Tuple

import numpy as np
import scipy.fft

from zk_strip.apis.spectral import PhysicalField
from zk_strip.apis.weights import InterpolationCase, InterpolationSides, WeightSpec

from ..spectral.transforms import forward_coeffs, integrate
from .norms import derivative_density, weight_column

# (k, m) per proved case
_CASE_ORDERS = {
    InterpolationCase.k1m0q: (1, 0),
    InterpolationCase.k2m1q2: (2, 1),
    InterpolationCase.k2m0q: (2, 0),
}


def steklov_check(profile: np.ndarray, width_L: float) -> float:
    """int psi^2 / int psi'^2 for a profile sampled on the interior nodes jL/(n+1)."""
    profile = np.asarray(profile, dtype=np.float64)
    if profile.ndim != 1 or profile.size == 0:
        raise ValueError("profile must be a non-empty 1-d sample")
    n = profile.size
    dy = width_L / (n + 1)
    c = math.sqrt(2.0 / width_L) * dy / 2.0 * scipy.fft.dst(profile, type=1)
    lam = (np.pi * np.arange(1, n + 1) / width_L) ** 2
    energy = float(np.sum(c**2 * lam))
    if energy == 0.0:
        raise ValueError("zero profile, Steklov ratio is undefined")
    return float(np.sum(c**2)) / energy


def interpolation_check(
    f: PhysicalField,
    case: InterpolationCase,
    w1: WeightSpec,
    w2: WeightSpec,
    q: float,
    max_weight_ratio: Optional[float] = None,
) -> InterpolationSides:
    """Both sides of the weighted interpolation bound, constant omitted.

    The bound presumes psi1 <= c0 psi2. The observed c0 is reported as
    `weight_ratio`; passing `max_weight_ratio` turns it into a hard check.
    """
    try:
        case = InterpolationCase(case)
    except ValueError:
        raise NotImplementedError(f"interpolation case `{case}` is not supported") from None
    if not math.isfinite(q):
        raise NotImplementedError("the q = infinity case is not supported")
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    if case == InterpolationCase.k2m1q2 and q != 2:
        raise ValueError(f"case {case.value} requires q = 2, got {q}")

    k, m = _CASE_ORDERS[case]
    s = (m + 1) / (2 * k) - 1 / (k * q)

    grid = f.grid
    coeffs = forward_coeffs(f.values, grid)
    psi1 = weight_column(w1, grid)
    psi2 = weight_column(w2, grid)
    weight_ratio = float(np.max(psi1 / psi2))
    if max_weight_ratio is not None and weight_ratio > max_weight_ratio:
        raise ValueError(
            f"{w1.label} <= c0 {w2.label} needs c0 = {weight_ratio:.4g} on this grid, "
            f"above the allowed {max_weight_ratio:g}"
        )

    low = np.sqrt(derivative_density(coeffs, grid, m)) * psi1**s * psi2 ** (0.5 - s)
    lhs = integrate(np.abs(low) ** q, grid) ** (1.0 / q)

    top = math.sqrt(integrate(derivative_density(coeffs, grid, k) * psi1, grid))
    base = math.sqrt(integrate(f.values**2 * psi2, grid))
    rhs = top ** (2 * s) * base ** (1 - 2 * s) + base
    return InterpolationSides(
        lhs=float(lhs), rhs_without_constant=float(rhs), s=s, weight_ratio=weight_ratio
    )


def sobolev_embedding_check(f: PhysicalField, p: float) -> Tuple[float, float]:
    """(|f|_{L_p*}, | |Df| |_{L_p}) with p* = 2p / (2 - p), for wall-vanishing f."""
    if not 1.0 <= p < 2.0:
        raise ValueError(f"p must lie in [1, 2), got {p}")
    p_star = 2 * p / (2 - p)
    grid = f.grid
    coeffs = forward_coeffs(f.values, grid)
    lhs = integrate(np.abs(f.values) ** p_star, grid) ** (1.0 / p_star)
    grad = np.sqrt(derivative_density(coeffs, grid, 1))
    rhs = integrate(grad**p, grid) ** (1.0 / p)
    return float(lhs), float(rhs)
