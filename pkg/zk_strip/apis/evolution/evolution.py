# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from zk_strip.apis.diagnostics import DiagnosticRecord
from zk_strip.apis.spectral import PhysicalField, StripGrid
from zk_strip.apis.weights import WeightSpec


# relative slack when checking plateau levels on the grid
PLATEAU_TOLERANCE = 1e-9


class StructureFlag(Enum):
    none = "none"
    both_infinities = "both_infinities"
    minus_infinity = "minus_infinity"
    plus_infinity = "plus_infinity"


class DampingPreset(Enum):
    none = "none"
    constant = "constant"
    both_infinities = "both_infinities"
    minus_infinity = "minus_infinity"
    plus_infinity = "plus_infinity"


class InitialPreset(Enum):
    gaussian = "gaussian"
    sech2 = "sech2"
    random_modes = "random_modes"
    zero = "zero"


class Coefficients(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    b: float = 0.0
    delta: float = Field(default=0.0, description="fourth-order regularization")
    a0: PhysicalField
    a1: PhysicalField
    a2: PhysicalField
    structure_flags: List[StructureFlag] = Field(default_factory=list)
    plateau_a: Optional[float] = None
    plateau_R: Optional[float] = None

    @model_validator(mode="after")
    def validate_structure(self) -> "Coefficients":
        if self.delta < 0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")
        grid = self.a0.grid
        if self.a1.grid != grid or self.a2.grid != grid:
            raise ValueError("damping fields live on different grids")
        for name in ("a1", "a2"):
            if np.any(getattr(self, name).values < 0):
                raise ValueError(f"{name} must be non-negative pointwise")

        flags = [f for f in self.structure_flags if f != StructureFlag.none]
        if not flags:
            return self
        if self.plateau_a is None or self.plateau_R is None:
            raise ValueError("structure flags require plateau_a and plateau_R")
        if self.plateau_a <= 0 or self.plateau_R <= 0:
            raise ValueError("plateau_a and plateau_R must be positive")

        x = grid.x
        floor = self.plateau_a * (1 - PLATEAU_TOLERANCE)
        for flag in flags:
            if flag == StructureFlag.both_infinities:
                region = np.abs(x) >= self.plateau_R
            elif flag == StructureFlag.minus_infinity:
                region = x <= -self.plateau_R
            else:
                region = x >= self.plateau_R
            for name in ("a1", "a2"):
                values = getattr(self, name).values[region]
                if values.size and values.min() < floor:
                    raise ValueError(
                        f"{name} drops to {values.min():.6g} below plateau level "
                        f"{self.plateau_a} in the {flag.value} region"
                    )
        return self

    @property
    def grid(self) -> StripGrid:
        return self.a0.grid

    @property
    def has_damping(self) -> bool:
        return any(np.any(getattr(self, n).values != 0) for n in ("a0", "a1", "a2"))

    @classmethod
    def zeros(cls, grid: StripGrid, b: float = 0.0, delta: float = 0.0) -> "Coefficients":
        return cls(
            b=b,
            delta=delta,
            a0=PhysicalField.zeros(grid),
            a1=PhysicalField.zeros(grid),
            a2=PhysicalField.zeros(grid),
        )


class SolverConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dt: float = 1e-3
    t_end: float
    h_cutoff: float = Field(default=1.0, description="cutoff parameter h of g_h")
    use_dealiasing: bool = True
    snapshot_every: int = 10
    nonlinear: bool = True
    blowup_factor: float = 1e6

    @model_validator(mode="after")
    def validate_times(self) -> "SolverConfig":
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end <= 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.dt > self.t_end:
            raise ValueError(f"dt ({self.dt}) must not exceed t_end ({self.t_end})")
        if self.h_cutoff <= 0:
            raise ValueError(f"h_cutoff must be positive, got {self.h_cutoff}")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be at least 1")
        n = self.t_end / self.dt
        if abs(n - round(n)) > 1e-6 * n:
            raise ValueError(
                f"t_end ({self.t_end}) must be an integer multiple of dt ({self.dt})"
            )
        return self

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


class DiagnosticProbes(BaseModel):
    """Which diagnostics a run evaluates on its snapshots."""

    weights: List[WeightSpec] = Field(default_factory=list)
    residuals: bool = True


class RunStatus(Enum):
    completed = "completed"
    blew_up = "blew_up"


class BlowUpError(RuntimeError):
    def __init__(self, t: float, norm: float, message: str = ""):
        self.t = t
        self.norm = norm
        super().__init__(message or f"numerical blow-up at t={t:.6g} (norm {norm:.6g})")


class Trajectory(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    times: List[float] = Field(default_factory=list)
    snapshots: List[PhysicalField] = Field(default_factory=list)
    diagnostics: List[DiagnosticRecord] = Field(default_factory=list)
    weights: List[WeightSpec] = Field(default_factory=list)
    status: RunStatus = RunStatus.completed
    failure_time: Optional[float] = None
    message: Optional[str] = None
    nonlinear: bool = True
    h_cutoff: float = 1.0

    @property
    def grid(self) -> StripGrid:
        return self.snapshots[0].grid

    def weight_index(self, w: WeightSpec) -> int:
        for i, candidate in enumerate(self.weights):
            if candidate == w:
                return i
        raise ValueError(f"trajectory carries no weighted norm for {w.label}")
