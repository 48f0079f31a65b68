# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import math
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from zk_strip.apis.evolution import DampingPreset, InitialPreset, SolverConfig
from zk_strip.apis.scenarios import ScenarioKind, ScenarioParams
from zk_strip.apis.spectral import StripGrid
from zk_strip.apis.weights import WeightSpec


class SnapshotFormat(Enum):
    binary = "binary"
    csv = "csv"


class DampingBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    preset: DampingPreset = DampingPreset.none
    a: float = Field(default=0.0, description="plateau level of a1 = a2")
    R: float = Field(default=5.0, description="plateau radius")
    width: float = Field(default=1.0, description="plateau transition width")
    absorption: float = Field(default=0.0, description="constant a0")
    sponge_strength: float = 0.0
    sponge_width: float = 0.0

    @model_validator(mode="after")
    def validate_levels(self) -> "DampingBlock":
        if self.a < 0:
            raise ValueError(f"a must be non-negative, got {self.a}")
        if self.preset != DampingPreset.none and self.a == 0:
            raise ValueError(f"preset {self.preset.value} needs a positive level a")
        if self.absorption < 0:
            raise ValueError(f"absorption must be non-negative, got {self.absorption}")
        if self.sponge_strength < 0 or self.sponge_width < 0:
            raise ValueError("sponge_strength and sponge_width must be non-negative")
        return self


class PhysicsBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    b: float = 0.0
    delta: float = 1e-3
    damping: DampingBlock = Field(default_factory=DampingBlock)

    @model_validator(mode="after")
    def validate_delta(self) -> "PhysicsBlock":
        if self.delta < 0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")
        return self


class InitialBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    preset: InitialPreset = InitialPreset.gaussian
    amplitude: float = Field(default=0.1, description="peak value of the initial profile")
    center: float = 0.0
    width: float = 1.0
    y_mode: int = 1


class ScenarioBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: ScenarioKind
    params: ScenarioParams = Field(default_factory=ScenarioParams)
    threshold_search: bool = False
    threshold_low: float = 1e-3
    threshold_high: float = 1.0
    threshold_iterations: int = 6
    tolerance: float = 1e-6


class SweepBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: ScenarioKind = ScenarioKind.C3_exp_weight_no_damping
    params: ScenarioParams = Field(default_factory=ScenarioParams)
    alphas: List[float]
    L_values: List[float]
    reference_alpha: Optional[float] = None
    reference_L: Optional[float] = None
    max_workers: Optional[int] = None

    @model_validator(mode="after")
    def validate_values(self) -> "SweepBlock":
        if not self.alphas or any(a <= 0 for a in self.alphas):
            raise ValueError("alphas must be a non-empty list of positive rates")
        if not self.L_values or any(L <= 0 for L in self.L_values):
            raise ValueError("L_values must be a non-empty list of positive widths")
        return self


class OutputBlock(BaseModel):
    model_config = ConfigDict(extra="forbid")

    directory: Optional[str] = None
    snapshots: bool = False
    snapshot_format: SnapshotFormat = SnapshotFormat.binary
    report: bool = True


class RunSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "zk_run"
    seed: int = 0
    grid: StripGrid
    physics: PhysicsBlock = Field(default_factory=PhysicsBlock)
    initial: InitialBlock = Field(default_factory=InitialBlock)
    time: SolverConfig
    weights: List[WeightSpec] = Field(default_factory=list)
    scenario: Optional[ScenarioBlock] = None
    sweep: Optional[SweepBlock] = None
    output: OutputBlock = Field(default_factory=OutputBlock)

    @model_validator(mode="after")
    def validate_cross_blocks(self) -> "RunSpec":
        if self.initial.y_mode > self.grid.ny:
            raise ValueError(
                f"initial.y_mode={self.initial.y_mode} exceeds grid.ny={self.grid.ny}"
            )
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.scenario and self.scenario.kind == ScenarioKind.C1_absorption:
            p = self.scenario.params
            margin = math.pi**2 * p.beta2 / self.grid.width_L**2 + p.beta0
            if margin <= 0:
                raise ValueError("scenario C1 needs beta0 > 0 or beta2 > 0")
            if p.beta is not None and p.beta > margin * (1 + 1e-12):
                raise ValueError(
                    f"scenario.params.beta={p.beta:g} exceeds the damping margin "
                    f"pi^2*beta2/L^2 + beta0 = {margin:g}"
                )
        return self
