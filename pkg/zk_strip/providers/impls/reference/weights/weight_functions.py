# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

"""Weight families psi(x) and their first three derivatives.

rho_alpha and kappa_0 are built from a monotone ramp m(x) that equals x past
its transition interval and decays like eps * e^x to a positive constant on
the left. The ramp is C^4, so every weight here is at least C^3 across its
joints:

    rho_alpha   = (1 + m(x))^{2 alpha}        ramp on [0, 1]
    rho_0       = 2 - (1 + m(x))^{-1/2}       ramp on [0, 1]
    kappa_0     = 2 - (1 + m(x))^{-1/2}       ramp on [-1, 0]
    kappa_alpha = exp(2 alpha [x + S(x + 1) (log(1 + x) - x)])   (alpha > 0)
"""

from functools import lru_cache
from typing import List, Optional

import numpy as np

from zk_strip.apis.weights import WeightKind, WeightSpec

from .smoothstep import SMOOTHSTEP, smoothstep

RAMP_EPS = 0.05
RHO_RAMP = (0.0, 1.0)
KAPPA_RAMP = (-1.0, 0.0)

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(32)
_SMOOTHSTEP_INTEGRAL = SMOOTHSTEP.integ()


def _tail_integral(start: float, upper: np.ndarray, width: float, eps: float) -> np.ndarray:
    """int_start^upper (1 - S) eps e^{z - start} dz by Gauss-Legendre per upper limit."""
    half = (upper - start)[:, None] / 2.0
    z = start + half * (_GAUSS_NODES[None, :] + 1.0)
    integrand = (1.0 - smoothstep((z - start) / width)) * eps * np.exp(z - start)
    return np.sum(integrand * _GAUSS_WEIGHTS[None, :], axis=1) * half[:, 0]


@lru_cache(maxsize=None)
def _ramp_floor(start: float, end: float, eps: float) -> float:
    width = end - start
    tail = _tail_integral(start, np.array([end]), width, eps)[0]
    return end - eps - width * float(_SMOOTHSTEP_INTEGRAL(1.0)) - tail


def ramp_jet(z: np.ndarray, start: float, end: float, eps: float = RAMP_EPS) -> List[np.ndarray]:
    """[m, m', m'', m'''] of the monotone ramp."""
    width = end - start
    floor = _ramp_floor(start, end, eps)
    t = (z - start) / width
    q = eps * np.exp(np.minimum(z - start, width))

    s0 = smoothstep(t)
    s1 = smoothstep(t, 1) / width
    s2 = smoothstep(t, 2) / width**2

    m1 = s0 + q * (1.0 - s0)
    m2 = s1 + q * ((1.0 - s0) - s1)
    m3 = s2 + q * ((1.0 - s0) - 2.0 * s1 - s2)

    m0 = np.where(z >= end, z, floor + q)
    mid = (t > 0.0) & (t < 1.0)
    if np.any(mid):
        zm = z[mid]
        m0[mid] = (
            floor
            + eps
            + width * _SMOOTHSTEP_INTEGRAL(t[mid])
            + _tail_integral(start, zm, width, eps)
        )
    # right of the ramp q is meaningless, derivatives are exactly (1, 0, 0)
    right = z >= end
    m1 = np.where(right, 1.0, m1)
    m2 = np.where(right, 0.0, m2)
    m3 = np.where(right, 0.0, m3)
    return [m0, m1, m2, m3]


def _power_jet(base: np.ndarray, c0: float, c1: float, p: float) -> List[np.ndarray]:
    """Derivatives of F(m) = c0 + c1 (1 + m)^p with respect to m."""
    out = [c0 + c1 * base**p]
    coef = c1
    for j in range(1, 4):
        coef = coef * (p - j + 1)
        out.append(coef * base ** (p - j))
    return out


def _compose(F: List[np.ndarray], m: List[np.ndarray]) -> List[np.ndarray]:
    return [
        F[0],
        F[1] * m[1],
        F[2] * m[1] ** 2 + F[1] * m[2],
        F[3] * m[1] ** 3 + 3.0 * F[2] * m[1] * m[2] + F[1] * m[3],
    ]


def _exp_jet(phi: List[np.ndarray]) -> List[np.ndarray]:
    value = np.exp(phi[0])
    return [
        value,
        phi[1] * value,
        (phi[2] + phi[1] ** 2) * value,
        (phi[3] + 3.0 * phi[1] * phi[2] + phi[1] ** 3) * value,
    ]


def _kappa_log_blend(z: np.ndarray, alpha: float) -> List[np.ndarray]:
    t = z + 1.0
    phi = [2.0 * alpha * z, np.full_like(z, 2.0 * alpha), np.zeros_like(z), np.zeros_like(z)]

    right = z >= 0.0
    if np.any(right):
        r = 1.0 + z[right]
        phi[0][right] = 2.0 * alpha * np.log(r)
        phi[1][right] = 2.0 * alpha / r
        phi[2][right] = -2.0 * alpha / r**2
        phi[3][right] = 4.0 * alpha / r**3

    mid = (t > 0.0) & (t < 1.0)
    if np.any(mid):
        x = z[mid]
        tm = t[mid]
        S = [smoothstep(tm, k) for k in range(4)]
        D = [
            np.log(tm) - x,
            1.0 / tm - 1.0,
            -1.0 / tm**2,
            2.0 / tm**3,
        ]
        phi[0][mid] = 2.0 * alpha * (x + S[0] * D[0])
        phi[1][mid] = 2.0 * alpha * (1.0 + S[1] * D[0] + S[0] * D[1])
        phi[2][mid] = 2.0 * alpha * (S[2] * D[0] + 2.0 * S[1] * D[1] + S[0] * D[2])
        phi[3][mid] = 2.0 * alpha * (
            S[3] * D[0] + 3.0 * S[2] * D[1] + 3.0 * S[1] * D[2] + S[0] * D[3]
        )
    return _exp_jet(phi)


def _base_jet(kind: WeightKind, alpha: float, z: np.ndarray) -> List[np.ndarray]:
    if kind == WeightKind.constant_one:
        return [np.ones_like(z)] + [np.zeros_like(z) for _ in range(3)]

    if kind in (WeightKind.exp_pure, WeightKind.exp_plus):
        e = np.exp(2.0 * alpha * z)
        jet = [e * (2.0 * alpha) ** j for j in range(4)]
        if kind == WeightKind.exp_plus:
            jet[0] = 1.0 + e
        return jet

    if kind == WeightKind.rho_alpha:
        m = ramp_jet(z, *RHO_RAMP)
        if alpha > 0:
            F = _power_jet(1.0 + m[0], 0.0, 1.0, 2.0 * alpha)
        else:
            F = _power_jet(1.0 + m[0], 2.0, -1.0, -0.5)
        return _compose(F, m)

    if kind == WeightKind.kappa_alpha:
        if alpha > 0:
            return _kappa_log_blend(z, alpha)
        m = ramp_jet(z, *KAPPA_RAMP)
        return _compose(_power_jet(1.0 + m[0], 2.0, -1.0, -0.5), m)

    raise ValueError(f"Unknown weight kind `{kind}`")


def weight_jet(w: WeightSpec, x, max_order: int = 3) -> List[np.ndarray]:
    """[psi, psi', ..., psi^(max_order)] at x."""
    if max_order > 3:
        raise NotImplementedError("weight derivatives above order 3 are not supported")
    z = w.scale * np.atleast_1d(np.asarray(x, dtype=np.float64))
    with np.errstate(divide="ignore", invalid="ignore"):
        jet = _base_jet(w.kind, w.alpha, z)
    return [jet[j] * w.scale**j for j in range(max_order + 1)]


def eval_weight(w: WeightSpec, x, deriv_order: int = 0):
    if deriv_order not in (0, 1, 2, 3):
        raise NotImplementedError(
            f"deriv_order must be 0, 1, 2 or 3, got {deriv_order}"
        )
    value = weight_jet(w, x, deriv_order)[deriv_order]
    if np.ndim(x) == 0:
        return float(value[0])
    return value


def admissibility_constant(
    w: WeightSpec,
    order: int = 1,
    x_range=(-60.0, 60.0),
    n_samples: int = 24001,
) -> float:
    """Empirical sup |psi^(order)| / psi over a dense sample."""
    x = np.linspace(x_range[0], x_range[1], n_samples)
    jet = weight_jet(w, x, order)
    return float(np.max(np.abs(jet[order]) / jet[0]))


def documented_admissibility_constant(w: WeightSpec) -> Optional[float]:
    """Closed-form sup |psi'| / psi where one exists."""
    if w.kind == WeightKind.constant_one:
        return 0.0
    if w.kind in (WeightKind.exp_pure, WeightKind.exp_plus):
        return 2.0 * w.alpha * w.scale
    return None
