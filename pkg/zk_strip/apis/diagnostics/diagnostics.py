# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class DiagnosticRecord(BaseModel):
    t: float
    l2: float
    h1: float
    energy: float
    weighted_l2: List[float] = Field(default_factory=list)
    seam_fraction: float = Field(
        default=0.0,
        description="share of int u^2 lying in the bands next to the periodic x-seam",
    )
    # seam_fraction above tolerance: weighted residuals see the wrapped mass
    wraparound: bool = False
    # residuals need neighbouring snapshots, so endpoints stay None
    identity_residual_l2: Optional[float] = None
    identity_residual_weighted: List[Optional[float]] = Field(default_factory=list)


class ResidualSeries(BaseModel):
    times: List[float]
    residual: List[float]
    terms: Dict[str, List[float]] = Field(
        default_factory=dict,
        description="each integral group of the identity, per interior snapshot",
    )

    @property
    def max_abs(self) -> float:
        return max((abs(r) for r in self.residual), default=0.0)
