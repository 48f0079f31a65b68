# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import math

import numpy as np
import pytest
from pydantic import ValidationError

from zk_strip.apis.spectral import PhysicalField, SpectralField, StripGrid
from zk_strip.providers.impls.reference.spectral import (
    dealias,
    dealias_mask,
    derivative,
    derivative_coeffs,
    forward_coeffs,
    forward_transform,
    integrate,
    inverse_coeffs,
    inverse_transform,
    spectral_norm_sq,
    translate,
    with_walls,
    y_derivative_values,
    y_flux_divergence,
)
from zk_strip.providers.tests.fixtures import periodic_grid, random_field

# How to run this test:
#
# ```bash
# pytest -s zk_strip/providers/tests/spectral/test_transforms.py --tb=short
# ```


@pytest.fixture
def grid():
    return periodic_grid(nx=32, ny=8, width_L=2.0)


def test_grid_rejects_odd_nx():
    with pytest.raises(ValidationError, match="must be even"):
        StripGrid(x_min=-1.0, x_max=1.0, nx=101, width_L=1.0, ny=4)


def test_grid_rejects_empty_box():
    with pytest.raises(ValidationError):
        StripGrid(x_min=1.0, x_max=1.0, nx=8, width_L=1.0, ny=4)


def test_grid_nodes(grid):
    assert grid.x[0] == grid.x_min
    assert grid.x[-1] == pytest.approx(grid.x_max - grid.dx)
    assert grid.y[0] == pytest.approx(grid.width_L / (grid.ny + 1))
    assert grid.y_with_walls[-1] == pytest.approx(grid.width_L)
    assert grid.k_index[grid.nx // 2] == -grid.nx // 2


def test_physical_field_rejects_bad_shape(grid):
    with pytest.raises(ValidationError):
        PhysicalField(grid=grid, values=np.zeros((grid.nx, grid.ny + 1)))


def test_physical_field_rejects_nan(grid):
    values = np.zeros(grid.shape)
    values[3, 2] = np.nan
    with pytest.raises(ValidationError, match="non-finite"):
        PhysicalField(grid=grid, values=values)


def test_forward_transform_rejects_unvalidated_nan(grid):
    values = np.zeros(grid.shape)
    values[0, 0] = np.inf
    field = PhysicalField.model_construct(grid=grid, values=values)
    with pytest.raises(ValueError):
        forward_transform(field)


def test_round_trip(grid):
    f = random_field(grid, seed=1)
    back = inverse_transform(forward_transform(f))
    assert np.max(np.abs(back.values - f.values)) <= 1e-12 * np.max(np.abs(f.values))


def test_parseval(grid):
    f = random_field(grid, seed=2)
    physical = integrate(f.values**2, grid)
    spectral = spectral_norm_sq(forward_transform(f).coeffs, grid)
    assert spectral == pytest.approx(physical, rel=1e-12)


def test_single_mode_coefficient(grid):
    # sin(pi y / L) = sqrt(L/2) * (orthonormal mode), constant in x
    f = PhysicalField.from_function(grid, lambda X, Y: np.sin(np.pi * Y / grid.width_L))
    c = forward_transform(f).coeffs
    expected = np.zeros(grid.shape, dtype=complex)
    expected[0, 0] = math.sqrt(grid.width_L / 2.0)
    np.testing.assert_allclose(c, expected, atol=1e-13)


def test_inverse_rejects_broken_symmetry(grid):
    coeffs = np.zeros(grid.shape, dtype=complex)
    coeffs[1, 0] = 1j
    with pytest.raises(ValueError, match="conjugate symmetry"):
        inverse_transform(SpectralField(grid=grid, coeffs=coeffs))


def test_x_derivative_exact(grid):
    L = grid.width_L
    f = PhysicalField.from_function(grid, lambda X, Y: np.sin(3 * X) * np.sin(np.pi * Y / L))
    ux = inverse_transform(derivative(forward_transform(f), 1, 0)).values
    uxxx = inverse_transform(derivative(forward_transform(f), 3, 0)).values
    X, Y = grid.meshgrid()
    np.testing.assert_allclose(ux, 3 * np.cos(3 * X) * np.sin(np.pi * Y / L), atol=1e-12)
    np.testing.assert_allclose(uxxx, -27 * np.cos(3 * X) * np.sin(np.pi * Y / L), atol=1e-11)


def test_y_second_derivative_exact(grid):
    L = grid.width_L
    f = PhysicalField.from_function(grid, lambda X, Y: np.cos(X) * np.sin(2 * np.pi * Y / L))
    uyy = inverse_transform(derivative(forward_transform(f), 0, 2)).values
    np.testing.assert_allclose(uyy, -((2 * np.pi / L) ** 2) * f.values, atol=1e-11)


def test_odd_y_order_rejected(grid):
    c = forward_coeffs(random_field(grid).values, grid)
    with pytest.raises(ValueError, match="odd y-derivatives"):
        derivative_coeffs(c, grid, 0, 1)


def test_nyquist_odd_derivative_vanishes(grid):
    L = grid.width_L
    sign = (-1.0) ** np.arange(grid.nx)
    f = PhysicalField(grid=grid, values=sign[:, None] * np.sin(np.pi * grid.y / L)[None, :])
    ux = inverse_transform(derivative(forward_transform(f), 1, 0)).values
    assert np.max(np.abs(ux)) <= 1e-12
    uxx = inverse_transform(derivative(forward_transform(f), 2, 0)).values
    np.testing.assert_allclose(uxx, -((grid.nx / 2) ** 2) * f.values, rtol=1e-10)


def test_y_derivative_values_include_walls(grid):
    L = grid.width_L
    f = PhysicalField.from_function(grid, lambda X, Y: np.cos(X) * np.sin(np.pi * Y / L))
    uy = y_derivative_values(forward_coeffs(f.values, grid), grid)
    assert uy.shape == (grid.nx, grid.ny + 2)
    expected = (np.pi / L) * np.cos(grid.x)[:, None] * np.cos(np.pi * grid.y_with_walls / L)[None, :]
    np.testing.assert_allclose(uy, expected, atol=1e-12)


def test_mixed_derivative_values(grid):
    L = grid.width_L
    f = PhysicalField.from_function(grid, lambda X, Y: np.sin(2 * X) * np.sin(3 * np.pi * Y / L))
    uxy = y_derivative_values(forward_coeffs(f.values, grid), grid, order_x=1)
    expected = (
        2 * np.cos(2 * grid.x)[:, None] * (3 * np.pi / L) * np.cos(3 * np.pi * grid.y_with_walls / L)[None, :]
    )
    np.testing.assert_allclose(uxy, expected, atol=1e-11)


def test_flux_divergence_of_cosine_flux(grid):
    L = grid.width_L
    y = grid.y_with_walls
    flux = np.sin(grid.x)[:, None] * np.cos(2 * np.pi * y / L)[None, :]
    div = inverse_coeffs(y_flux_divergence(flux, grid), grid)
    expected = -(2 * np.pi / L) * np.sin(grid.x)[:, None] * np.sin(2 * np.pi * grid.y / L)[None, :]
    np.testing.assert_allclose(div, expected, atol=1e-12)


def test_flux_divergence_shape_checked(grid):
    with pytest.raises(ValueError, match="flux must be sampled"):
        y_flux_divergence(np.zeros(grid.shape), grid)


def test_flux_divergence_inverts_y_derivative(grid):
    # d_y of u_y is u_yy
    c = forward_coeffs(random_field(grid, seed=4).values, grid)
    via_flux = y_flux_divergence(y_derivative_values(c, grid), grid)
    np.testing.assert_allclose(via_flux, derivative_coeffs(c, grid, 0, 2), atol=1e-10)


def test_dealias_mask(grid):
    mask = dealias_mask(grid)
    assert mask[0, 0]
    assert not mask[grid.nx // 2, 0]
    assert not mask[0, grid.ny - 1]
    s = dealias(forward_transform(random_field(grid, seed=5)))
    assert np.all(s.coeffs[~mask] == 0)


def test_translate_is_exact_shift(grid):
    L = grid.width_L
    f = PhysicalField.from_function(grid, lambda X, Y: np.sin(X) * np.sin(np.pi * Y / L))
    shifted = inverse_transform(translate(forward_transform(f), 0.5)).values
    X, Y = grid.meshgrid()
    np.testing.assert_allclose(shifted, np.sin(X + 0.5) * np.sin(np.pi * Y / L), atol=1e-12)


def test_integrate_walls_and_interior_agree(grid):
    values = np.ones(grid.shape)
    assert integrate(values, grid) == pytest.approx(grid.period * grid.ny * grid.dy)
    walled = with_walls(values)
    assert integrate(walled, grid) == pytest.approx(grid.period * grid.width_L)
    with pytest.raises(ValueError, match="cannot integrate"):
        integrate(np.ones((3, 3)), grid)
