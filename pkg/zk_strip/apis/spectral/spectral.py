# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class StripGrid(BaseModel):
    """Periodic x-box [x_min, x_max) times the sine basis l = 1..ny on (0, L)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    x_min: float = Field(description="left end of the periodic x-box")
    x_max: float = Field(description="right end of the periodic x-box")
    nx: int = Field(description="x sample count, even and at least 4")
    width_L: float = Field(description="strip width L")
    ny: int = Field(description="number of sine modes, interior y nodes jL/(ny+1)")

    @field_validator("nx")
    @classmethod
    def validate_nx(cls, v: int) -> int:
        if v < 4:
            raise ValueError("must be at least 4")
        if v % 2 != 0:
            raise ValueError("must be even")
        return v

    @field_validator("ny")
    @classmethod
    def validate_ny(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("width_L")
    @classmethod
    def validate_width(cls, v: float) -> float:
        if not (v > 0 and math.isfinite(v)):
            raise ValueError("must be positive")
        return v

    @model_validator(mode="after")
    def validate_box(self) -> "StripGrid":
        if not self.x_max > self.x_min:
            raise ValueError(
                f"x_max ({self.x_max}) must be greater than x_min ({self.x_min})"
            )
        return self

    @property
    def period(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.period / self.nx

    @property
    def dy(self) -> float:
        return self.width_L / (self.ny + 1)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        """Interior nodes only; the walls are implied by the sine basis."""
        return self.dy * np.arange(1, self.ny + 1)

    @property
    def y_with_walls(self) -> np.ndarray:
        return self.dy * np.arange(self.ny + 2)

    @property
    def k_index(self) -> np.ndarray:
        # FFT ordering: 0, 1, ..., nx/2 - 1, -nx/2, ..., -1
        return np.fft.fftfreq(self.nx, d=1.0 / self.nx)

    @property
    def xi(self) -> np.ndarray:
        return 2.0 * np.pi * self.k_index / self.period

    @property
    def l_modes(self) -> np.ndarray:
        return np.arange(1, self.ny + 1)

    @property
    def lam(self) -> np.ndarray:
        """Transverse eigenvalues lambda_l = (pi l / L)^2."""
        return (np.pi * self.l_modes / self.width_L) ** 2

    @property
    def shape(self):
        return (self.nx, self.ny)

    def meshgrid(self):
        return np.meshgrid(self.x, self.y, indexing="ij")


class PhysicalField(BaseModel):
    """Samples u(x_i, y_j) on the interior nodes of a StripGrid."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    grid: StripGrid
    values: np.ndarray

    @model_validator(mode="after")
    def validate_values(self) -> "PhysicalField":
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.grid.shape:
            raise ValueError(
                f"field shape {values.shape} does not match grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        self.values = values
        return self

    @classmethod
    def zeros(cls, grid: StripGrid) -> "PhysicalField":
        return cls(grid=grid, values=np.zeros(grid.shape))

    @classmethod
    def from_function(cls, grid: StripGrid, fn) -> "PhysicalField":
        X, Y = grid.meshgrid()
        return cls(grid=grid, values=np.broadcast_to(fn(X, Y), grid.shape).copy())


class SpectralField(BaseModel):
    """Fourier(x) x sine(y) coefficients, k in FFT order along axis 0, l = 1..ny along axis 1."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    grid: StripGrid
    coeffs: np.ndarray

    @model_validator(mode="after")
    def validate_coeffs(self) -> "SpectralField":
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != self.grid.shape:
            raise ValueError(
                f"coefficient shape {coeffs.shape} does not match grid shape {self.grid.shape}"
            )
        self.coeffs = coeffs
        return self

    @classmethod
    def zeros(cls, grid: StripGrid) -> "SpectralField":
        return cls(grid=grid, coeffs=np.zeros(grid.shape, dtype=np.complex128))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(grid=self.grid, coeffs=coeffs)
