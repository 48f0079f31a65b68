# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

import math

import numpy as np
import pytest
from pydantic import ValidationError

from zk_strip.apis.weights import WeightKind, WeightSpec
from zk_strip.providers.impls.reference.weights import (
    admissibility_constant,
    documented_admissibility_constant,
    eval_weight,
    ramp_jet,
    SMOOTHSTEP,
    smoothstep,
    weight_jet,
)

ALL_WEIGHTS = [
    WeightSpec(kind=WeightKind.constant_one),
    WeightSpec(kind=WeightKind.rho_alpha, alpha=0.0),
    WeightSpec(kind=WeightKind.rho_alpha, alpha=0.25),
    WeightSpec(kind=WeightKind.rho_alpha, alpha=1.0),
    WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.0),
    WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.3),
    WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.0, scale=0.2),
    WeightSpec(kind=WeightKind.exp_plus, alpha=0.1),
    WeightSpec(kind=WeightKind.exp_pure, alpha=0.5),
]

JOINTS = [-1.0, 0.0, 1.0]


def test_smoothstep_endpoints():
    assert SMOOTHSTEP(0.0) == 0.0
    assert SMOOTHSTEP(1.0) == pytest.approx(1.0, abs=1e-14)
    for k in (1, 2, 3):
        assert SMOOTHSTEP.deriv(k)(0.0) == 0.0
        assert SMOOTHSTEP.deriv(k)(1.0) == pytest.approx(0.0, abs=1e-10)


def test_smoothstep_partition_of_unity():
    t = np.linspace(-0.5, 1.5, 401)
    np.testing.assert_allclose(smoothstep(t) + smoothstep(1.0 - t), 1.0, atol=1e-14)
    assert smoothstep(-1.0) == 0.0
    assert smoothstep(2.0) == 1.0


def test_smoothstep_rejects_high_order():
    with pytest.raises(NotImplementedError):
        smoothstep(0.5, 4)


def test_weight_spec_validation():
    with pytest.raises(ValidationError, match="requires alpha > 0"):
        WeightSpec(kind=WeightKind.exp_pure, alpha=0.0)
    with pytest.raises(ValidationError, match="non-negative"):
        WeightSpec(kind=WeightKind.rho_alpha, alpha=-0.1)
    with pytest.raises(ValidationError):
        WeightSpec(kind=WeightKind.rho_alpha, alpha=0.1, colour="red")


@pytest.mark.parametrize(
    "w, x, expected",
    [
        (WeightSpec(kind=WeightKind.rho_alpha, alpha=1.0), 3.0, 16.0),
        (WeightSpec(kind=WeightKind.exp_plus, alpha=0.5), 0.0, 2.0),
        (WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.0), 0.0, 1.0),
        (WeightSpec(kind=WeightKind.constant_one), -7.0, 1.0),
        (WeightSpec(kind=WeightKind.exp_pure, alpha=0.5), 2.0, math.e**2),
    ],
)
def test_eval_weight_examples(w, x, expected):
    assert eval_weight(w, x) == pytest.approx(expected, rel=1e-12)


def test_eval_weight_returns_float_for_scalars():
    value = eval_weight(WeightSpec(kind=WeightKind.rho_alpha, alpha=0.5), 0.3)
    assert isinstance(value, float)


def test_eval_weight_rejects_order_four():
    with pytest.raises(NotImplementedError):
        eval_weight(WeightSpec(kind=WeightKind.exp_pure, alpha=0.1), 0.0, 4)


def test_rho_branches():
    x = np.linspace(1.0, 10.0, 50)
    w = WeightSpec(kind=WeightKind.rho_alpha, alpha=0.3)
    np.testing.assert_allclose(eval_weight(w, x), (1 + x) ** 0.6, rtol=1e-13)
    w0 = WeightSpec(kind=WeightKind.rho_alpha, alpha=0.0)
    np.testing.assert_allclose(eval_weight(w0, x), 2 - (1 + x) ** -0.5, rtol=1e-13)

    everywhere = np.linspace(-40.0, 40.0, 4001)
    assert np.all(eval_weight(w, everywhere) > 1.0)
    rho0 = eval_weight(w0, everywhere)
    assert np.all(rho0 > 1.0) and np.all(rho0 < 2.0)


def test_kappa_branches():
    left = np.linspace(-10.0, -1.0, 50)
    right = np.linspace(0.0, 10.0, 50)
    w = WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.4)
    np.testing.assert_allclose(eval_weight(w, left), np.exp(0.8 * left), rtol=1e-13)
    np.testing.assert_allclose(eval_weight(w, right), (1 + right) ** 0.8, rtol=1e-13)
    w0 = WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.0)
    np.testing.assert_allclose(eval_weight(w0, right), 2 - (1 + right) ** -0.5, rtol=1e-13)

    mid = np.linspace(-0.99, -0.01, 99)
    assert np.all(eval_weight(w, mid, 1) > 0)
    assert np.all(eval_weight(w0, mid, 1) > 0)


def test_scale_composes_argument():
    base = WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.0)
    scaled = WeightSpec(kind=WeightKind.kappa_alpha, alpha=0.0, scale=0.1)
    x = np.linspace(-30.0, 30.0, 61)
    np.testing.assert_allclose(eval_weight(scaled, x), eval_weight(base, 0.1 * x), rtol=1e-14)
    np.testing.assert_allclose(eval_weight(scaled, x, 1), 0.1 * eval_weight(base, 0.1 * x, 1), rtol=1e-14)


@pytest.mark.parametrize("w", ALL_WEIGHTS, ids=lambda w: w.label)
def test_positive_and_non_decreasing(w):
    x = np.linspace(-40.0, 40.0, 16001)
    assert np.all(eval_weight(w, x) > 0)
    assert np.all(eval_weight(w, x, 1) >= 0)


@pytest.mark.parametrize("w", ALL_WEIGHTS, ids=lambda w: w.label)
def test_derivatives_match_finite_differences(w):
    x = np.linspace(-3.0, 3.0, 241) + 0.0123
    # stay clear of the joints, where the fourth derivative is unbounded
    x = x[np.min(np.abs(x[:, None] - np.array(JOINTS)[None, :]), axis=1) > 0.01]
    h = 1e-5
    for order in (1, 2, 3):
        lower_plus = eval_weight(w, x + h, order - 1)
        lower_minus = eval_weight(w, x - h, order - 1)
        fd = (lower_plus - lower_minus) / (2 * h)
        exact = eval_weight(w, x, order)
        scale = 1.0 + np.max(np.abs(exact))
        assert np.max(np.abs(fd - exact)) <= 1e-5 * scale, f"order {order}"


@pytest.mark.parametrize("joint", JOINTS)
def test_c3_across_joints(joint):
    eps = 1e-12
    for w in ALL_WEIGHTS:
        jet_left = weight_jet(w, np.array([joint - eps]))
        jet_right = weight_jet(w, np.array([joint + eps]))
        for order in range(4):
            a, b = jet_left[order][0], jet_right[order][0]
            assert abs(a - b) <= 1e-6 * (1 + abs(a)), f"{w.label} order {order} at {joint}"


def test_ramp_is_identity_past_transition():
    z = np.array([0.0, 1.0, 2.5, 7.0])
    m = ramp_jet(z, -1.0, 0.0)
    np.testing.assert_allclose(m[0], z)
    np.testing.assert_allclose(m[1], 1.0)
    np.testing.assert_allclose(m[2], 0.0)


def test_ramp_floor_above_minus_one():
    m = ramp_jet(np.array([-60.0]), 0.0, 1.0)
    assert m[0][0] > -1.0
    m = ramp_jet(np.array([-60.0]), -1.0, 0.0)
    assert m[0][0] > -1.0


@pytest.mark.parametrize(
    "w",
    [
        WeightSpec(kind=WeightKind.constant_one),
        WeightSpec(kind=WeightKind.exp_pure, alpha=0.3),
        WeightSpec(kind=WeightKind.exp_plus, alpha=0.3),
        WeightSpec(kind=WeightKind.exp_pure, alpha=0.3, scale=0.5),
    ],
    ids=lambda w: w.label,
)
def test_admissibility_matches_documented_constant(w):
    documented = documented_admissibility_constant(w)
    observed = admissibility_constant(w)
    assert observed == pytest.approx(documented, rel=0.05, abs=1e-12)


@pytest.mark.parametrize("w", ALL_WEIGHTS, ids=lambda w: w.label)
def test_admissibility_is_finite(w):
    for order in (1, 2, 3):
        c = admissibility_constant(w, order=order)
        assert math.isfinite(c)
        assert c < 100.0
