# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from zk_strip.apis.weights import WeightKind, WeightSpec


class ScenarioKind(Enum):
    C1_absorption = "C1_absorption"
    C2_both_infinities = "C2_both_infinities"
    C3_exp_weight_no_damping = "C3_exp_weight_no_damping"
    C4_minus_infinity = "C4_minus_infinity"
    C5_plus_infinity = "C5_plus_infinity"


class ScenarioParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    beta: Optional[float] = Field(
        default=None,
        description="target decay rate for C1; defaults to the damping margin",
    )
    beta0: float = Field(default=0.0, description="absorption floor for C1")
    beta2: float = Field(default=0.0, description="transverse dissipation floor for C1")
    a: float = 1.0
    R: float = 5.0
    plateau_width: float = 1.0
    alpha: float = 0.1
    amplitude: float = Field(default=0.1, description="L2 norm of the initial bump")
    center: float = 0.0
    width: float = 1.0
    sponge_width: float = 4.0
    sponge_strength: float = 2.0

    @model_validator(mode="after")
    def validate_params(self) -> "ScenarioParams":
        for name in ("a", "R", "plateau_width", "alpha", "amplitude", "width"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("beta0", "beta2", "sponge_width", "sponge_strength"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.beta is not None and self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        return self


def paired_weight(kind: ScenarioKind, alpha: float) -> WeightSpec:
    if kind == ScenarioKind.C3_exp_weight_no_damping:
        return WeightSpec(kind=WeightKind.exp_pure, alpha=alpha)
    if kind == ScenarioKind.C4_minus_infinity:
        return WeightSpec(kind=WeightKind.exp_plus, alpha=alpha)
    if kind == ScenarioKind.C5_plus_infinity:
        # kappa_0 evaluated at alpha * x
        return WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.0, scale=alpha)
    return WeightSpec(kind=WeightKind.constant_one)


class Scenario(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: ScenarioKind
    params: ScenarioParams = Field(default_factory=ScenarioParams)
    weight: Optional[WeightSpec] = None

    @model_validator(mode="after")
    def pair_weight(self) -> "Scenario":
        expected = paired_weight(self.kind, self.params.alpha)
        if self.weight is None:
            self.weight = expected
        elif self.weight != expected:
            raise ValueError(
                f"{self.kind.value} pairs with weight {expected.label}, got {self.weight.label}"
            )
        return self


class BetaSource(Enum):
    # C1: closed-form damping margin, independent of the run
    damping_margin = "damping_margin"
    # capped by the envelope of the same trajectory, so the bound holds by construction
    trajectory_envelope = "trajectory_envelope"
    # passed in by the caller
    given = "given"


class DecayReport(BaseModel):
    scenario: Optional[ScenarioKind] = None
    weight: WeightSpec
    fitted_rate: Optional[float] = None
    fit_r2: Optional[float] = None
    bound_holds: bool
    bound_margin: float
    prefactor_used: float
    beta_used: float
    beta_source: BetaSource = Field(
        default=BetaSource.given,
        description="where beta_used came from; trajectory_envelope makes bound_holds a consistency check only",
    )
    tolerance: float
    observed_prefactor: Optional[float] = Field(
        default=None,
        description="max over t of |u(t)| e^{beta t} / |u0| in the weighted norm",
    )
    discarded_fraction: float = 0.1
    l2_monotone: Optional[bool] = None
    blew_up: bool = False
    amplitude: Optional[float] = None


class RateScalingRow(BaseModel):
    alpha: float
    width_L: float
    fitted_rate: Optional[float]
    fit_r2: Optional[float]


class TrendFit(BaseModel):
    variable: str
    slope: float
    intercept: float
    r2: float


class RateScalingTable(BaseModel):
    kind: ScenarioKind
    rows: List[RateScalingRow] = Field(default_factory=list)
    alpha_trend: Optional[TrendFit] = None
    width_trend: Optional[TrendFit] = None
