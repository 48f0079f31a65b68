# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class WeightKind(Enum):
    constant_one = "constant_one"
    rho_alpha = "rho_alpha"
    kappa_alpha = "kappa_alpha"
    exp_plus = "exp_plus"
    exp_pure = "exp_pure"


class WeightSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: WeightKind = WeightKind.constant_one
    alpha: float = Field(
        default=0.0,
        description="exponent / rate parameter of the family",
    )
    scale: float = Field(
        default=1.0,
        description="argument scaling, the weight is evaluated at scale * x",
    )

    @model_validator(mode="after")
    def validate_alpha(self) -> "WeightSpec":
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if self.kind in (WeightKind.exp_plus, WeightKind.exp_pure) and self.alpha <= 0:
            raise ValueError(f"{self.kind.value} requires alpha > 0")
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        return self

    @property
    def label(self) -> str:
        if self.kind == WeightKind.constant_one:
            return "one"
        label = f"{self.kind.value}({self.alpha:g})"
        if self.scale != 1.0:
            label += f"@{self.scale:g}x"
        return label


class InterpolationCase(Enum):
    """The three (k, m, q) combinations for which the interpolation bound is checked."""

    k1m0q = "k1m0q"
    k2m1q2 = "k2m1q2"
    k2m0q = "k2m0q"


class InterpolationSides(BaseModel):
    lhs: float
    rhs_without_constant: float
    s: float
    # max psi1 / psi2 over the grid, the c0 of psi1 <= c0 psi2
    weight_ratio: float = 1.0

    @property
    def ratio(self) -> float:
        if self.rhs_without_constant == 0.0:
            return 0.0
        return self.lhs / self.rhs_without_constant
