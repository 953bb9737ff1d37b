"""Steady rigid rotation as a solution of the surface Euler equations."""

import math

import numpy as np
import pytest

from tensorcalc.builtins import get_case
from tensorcalc.euler import (
    convective_identity_residual,
    divergence_form_residual,
    extrinsic_momentum,
    force_balance,
    incompressibility,
    momentum_residual,
    rigid_rotation_state,
    tangency,
    tangent_velocity_identity,
)
from tensorcalc.fields import random_polynomial
from tensorcalc.operators import DiffConfig

AN = DiffConfig(mode="analytic")
FD2 = DiffConfig(mode="fd2")
OMEGA = 1.3


def test_rigid_rotation_fields():
    state = rigid_rotation_state(get_case("sphere").geometry, omega=OMEGA)
    x = np.array([0.6, 0.0, 0.8])
    np.testing.assert_allclose(state.velocity.values(x, 0.0), [0.0, OMEGA * 0.6, 0.0], atol=1e-14)
    np.testing.assert_allclose(
        float(state.pressure.values(x, 0.0)), 0.5 * OMEGA**2 * 0.36, atol=1e-14
    )
    assert tangency(state, x) <= 1e-14


@pytest.mark.parametrize("name", ["sphere", "torus"])
def test_steady_state_residuals(name):
    """Momentum, divergence-form, and convective identities on surfaces of
    revolution about the rotation axis."""
    case = get_case(name)
    state = rigid_rotation_state(case.geometry, omega=OMEGA)
    for x in case.sample_points(4):
        assert np.linalg.norm(momentum_residual(state, x, 0.0, FD2)) <= 1e-5
        assert np.linalg.norm(momentum_residual(state, x, 0.0, AN)) <= 1e-8
        assert np.linalg.norm(divergence_form_residual(state, x, 0.0, AN)) <= 1e-8
        assert np.linalg.norm(convective_identity_residual(state, x, 0.0, AN)) <= 1e-8
        assert abs(incompressibility(state, x, 0.0, AN)) <= 1e-10
        assert tangency(state, x) <= 1e-12


def test_extrinsic_momentum_vanishes():
    case = get_case("sphere")
    state = rigid_rotation_state(case.geometry, omega=OMEGA)
    J = extrinsic_momentum(case.atlas(order=12, panels=2), state.velocity)
    assert np.linalg.norm(np.asarray(J)) <= 1e-8


def test_tangent_velocity_identity(rng):
    case = get_case("hemisphere")
    atlas = case.atlas(order=12, panels=2)
    u = random_polynomial(3, 1, rng, degree=2)
    res = tangent_velocity_identity(atlas, u, AN)
    assert res.rel_residual <= 1e-8


def test_hemisphere_force_balance_pieces():
    """The axial force splits into w^2 pi/2 (pressure), -w^2 pi (reaction),
    and w^2 pi/2 (centripetal), summing to zero."""
    case = get_case("hemisphere")
    state = rigid_rotation_state(case.geometry, omega=OMEGA)
    res = force_balance(case.atlas(order=12, panels=2), state, AN)
    np.testing.assert_allclose(np.asarray(res.lhs), np.zeros(3), atol=1e-8)
    np.testing.assert_allclose(
        res.pieces["young_laplace"][2], OMEGA**2 * math.pi / 2, atol=1e-8
    )
    np.testing.assert_allclose(res.pieces["reaction"][2], -(OMEGA**2) * math.pi, atol=1e-8)
    np.testing.assert_allclose(
        res.pieces["centripetal"][2], OMEGA**2 * math.pi / 2, atol=1e-8
    )


def test_force_balance_scales_like_omega_squared():
    case = get_case("hemisphere")
    atlas = case.atlas(order=10, panels=1)
    lo = force_balance(atlas, rigid_rotation_state(case.geometry, omega=1.0), AN)
    hi = force_balance(atlas, rigid_rotation_state(case.geometry, omega=2.0), AN)
    np.testing.assert_allclose(
        hi.pieces["young_laplace"][2], 4.0 * lo.pieces["young_laplace"][2], atol=1e-9
    )
