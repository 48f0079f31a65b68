# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import numpy as np
from numpy.polynomial import Polynomial

# S(t) = 35t^4 - 84t^5 + 70t^6 - 20t^7: S(0)=0, S(1)=1, first three derivatives
# vanish at both ends and S(t) + S(1 - t) == 1.
SMOOTHSTEP = Polynomial([0, 0, 0, 0, 35, -84, 70, -20])

_DERIVATIVES = [SMOOTHSTEP] + [SMOOTHSTEP.deriv(k) for k in range(1, 4)]


def smoothstep(t, order: int = 0):
    """Cut-off eta and its derivatives, 0 for t <= 0 and 1 for t >= 1."""
    if order < 0 or order > 3:
        raise NotImplementedError(f"smoothstep derivative order {order} is not supported")
    t = np.asarray(t, dtype=np.float64)
    inside = _DERIVATIVES[order](np.clip(t, 0.0, 1.0))
    if order == 0:
        return np.where(t <= 0.0, 0.0, np.where(t >= 1.0, 1.0, inside))
    return np.where((t <= 0.0) | (t >= 1.0), 0.0, inside)
