# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

"""Cut-off nonlinearity g_h and the primitive of g_h'(u) u.

    g_h'(u) = u eta(2 - h|u|) + (2 sgn u / h) eta(h|u| - 1)

Closed forms follow from substituting |u| = (1 + s) / h on the transition
band 1/h <= |u| <= 2/h:

    g_h'(u)   = sgn u (1/h) [(1 + s) + eta(s) (1 - s)]
    g_h(u)    = (1/h^2) [1/2 + s + s^2/2 + int_0^s eta (1 - s')]
    K(u)      = sgn u (1/h^3) [1/3 + ((1 + s)^3 - 1)/3 + int_0^s eta (1 - s'^2)]

where K(u) = int_0^u g_h'(theta) theta dtheta. Beyond 2/h g_h' is the constant 2/h.
"""

import numpy as np
from numpy.polynomial import Polynomial

from ..weights.smoothstep import SMOOTHSTEP, smoothstep

_Q1 = (SMOOTHSTEP * Polynomial([1, -1])).integ()
_Q2 = (SMOOTHSTEP * Polynomial([1, 0, -1])).integ()


def _check_h(h: float):
    if h <= 0:
        raise ValueError(f"cutoff parameter h must be positive, got {h}")


def _scalar_or_array(values: np.ndarray):
    return float(values) if values.ndim == 0 else values


def g_h_prime(u, h: float):
    _check_h(h)
    u = np.asarray(u, dtype=np.float64)
    r = np.abs(u)
    s = np.clip(h * r - 1.0, 0.0, 1.0)
    band = (1.0 + s + smoothstep(s) * (1.0 - s)) / h
    out = np.where(r <= 1.0 / h, r, np.where(r >= 2.0 / h, 2.0 / h, band))
    return _scalar_or_array(np.sign(u) * out)


def g_h(u, h: float):
    _check_h(h)
    u = np.asarray(u, dtype=np.float64)
    r = np.abs(u)
    s = np.clip(h * r - 1.0, 0.0, 1.0)
    band = (0.5 + s + 0.5 * s**2 + _Q1(s)) / h**2
    top = (2.0 + _Q1(1.0)) / h**2 + (2.0 / h) * (r - 2.0 / h)
    return _scalar_or_array(
        np.where(r <= 1.0 / h, 0.5 * r**2, np.where(r >= 2.0 / h, top, band))
    )


def g_h_primitive(u, h: float):
    """K(u) = int_0^u g_h'(theta) theta dtheta, so that g_h'(u) u u_x = K(u)_x."""
    _check_h(h)
    u = np.asarray(u, dtype=np.float64)
    r = np.abs(u)
    s = np.clip(h * r - 1.0, 0.0, 1.0)
    band = (1.0 / 3.0 + ((1.0 + s) ** 3 - 1.0) / 3.0 + _Q2(s)) / h**3
    top = (8.0 / 3.0 + _Q2(1.0)) / h**3 + (r**2 - 4.0 / h**2) / h
    out = np.where(r <= 1.0 / h, r**3 / 3.0, np.where(r >= 2.0 / h, top, band))
    return _scalar_or_array(np.sign(u) * out)
