"""Surface stresses: force and torque identities, equilibrium diagnostics."""

import numpy as np
import pytest

from tensorcalc.builtins import get_case
from tensorcalc.fields import random_polynomial
from tensorcalc.geometry import frame_from_normals
from tensorcalc.operators import DiffConfig, divergence, projector_field
from tensorcalc.stress import (
    cross_stress,
    force_residual,
    generator_identity,
    normal_at_tangential,
    omega_field,
    omega_pairings,
    rotation_generator,
    stress_torque,
    torque_equivalence,
    transpose_field,
    worst_equilibrium_diagnostics,
)
from tensorcalc.tensor import Tensor

AN = DiffConfig(mode="analytic")
FD2 = DiffConfig(mode="fd2")
PLANES = [(0, 1), (0, 2), (1, 2)]


def test_rotation_generator_values():
    l01 = rotation_generator(3, 0, 1)
    x = np.array([2.0, 3.0, 5.0])
    np.testing.assert_allclose(l01.values(x, 0.0), [-3.0, 2.0, 0.0], atol=1e-14)
    with pytest.raises(ValueError):
        rotation_generator(3, 1, 1)


def test_transpose_field_insertion_invariant(rng):
    """insert_right of the transpose equals insert_left of the original."""
    sigma = random_polynomial(3, 2, rng, degree=2)
    bar = transpose_field(sigma)
    x = rng.normal(size=3)
    v = rng.normal(size=3)
    lhs = Tensor(3, bar.values(x, 0.0)).insert_right(v)
    rhs = Tensor(3, sigma.values(x, 0.0)).insert_left(v)
    np.testing.assert_allclose(lhs.array, rhs.array, atol=1e-12)


def test_omega_field_is_antisymmetric_projector_pairing():
    case = get_case("sphere")
    om = omega_field(case.geometry, 0, 1)
    for x in case.sample_points(3):
        P = case.geometry.frame_at(x, 0.0).P
        vals = om.values(x, 0.0)
        np.testing.assert_allclose(vals[0], P[1], atol=1e-13)
        np.testing.assert_allclose(vals[1], -P[0], atol=1e-13)


def test_force_residual(rng):
    atlas = get_case("hemisphere").atlas(order=12, panels=2)
    sigma = random_polynomial(3, 2, rng, degree=2)
    assert force_residual(atlas, sigma, AN).rel_residual <= 1e-8
    assert force_residual(atlas, sigma, FD2).rel_residual <= 1e-6


def test_torque_equivalence_per_plane(rng):
    atlas = get_case("hemisphere").atlas(order=12, panels=2)
    sigma = random_polynomial(3, 2, rng, degree=2)
    for plane in PLANES:
        assert torque_equivalence(atlas, sigma, plane, AN).rel_residual <= 1e-8


def test_generator_identity_per_plane(rng):
    atlas = get_case("torus").atlas(order=12, panels=2)
    a = random_polynomial(3, 2, rng, degree=2)
    for plane in PLANES:
        assert generator_identity(atlas, a, plane, AN).rel_residual <= 1e-8


def test_cross_stress_is_equilibrated():
    """sigma = eps . n carries no force or torque and is divergence free."""
    case = get_case("sphere")
    atlas = case.atlas(order=12, panels=2)
    sigma = cross_stress(case.geometry)
    div_bar = divergence(transpose_field(sigma), case.geometry, AN)
    for x in case.sample_points(4):
        assert np.linalg.norm(div_bar.values(x, 0.0)) <= 1e-10
    res = force_residual(atlas, sigma, AN)
    assert np.linalg.norm(np.asarray(res.rhs)) <= 1e-10
    for plane in PLANES:
        assert abs(stress_torque(atlas, sigma, plane, AN)) <= 1e-10


def test_cross_stress_is_tangential_but_asymmetric():
    case = get_case("sphere")
    sigma = cross_stress(case.geometry)
    north = np.array([0.0, 0.0, 1.0])
    fr = case.geometry.frame_at(north, 0.0)
    sig = sigma.values(north, 0.0)
    assert normal_at_tangential(sig, fr) <= 1e-13
    np.testing.assert_allclose(omega_pairings(sig, fr)[(0, 1)], -2.0, atol=1e-13)


def test_contrapositive_stress_has_normal_response(rng):
    """sigma = (P w) (x) n responds normally to tangential cuts with norm |P w|."""
    case = get_case("sphere")
    x = case.sample_points(1, seed=4)[0]
    fr = case.geometry.frame_at(x, 0.0)
    w = rng.normal(size=3)
    sig = np.outer(fr.P @ w, fr.normals[0])
    nat = normal_at_tangential(sig, fr)
    np.testing.assert_allclose(nat, np.linalg.norm(fr.P @ w), atol=1e-12)
    assert max(abs(v) for v in omega_pairings(sig, fr).values()) > 1e-2


def test_constrained_family_stays_tangential(rng):
    """a P + sum_k n_k (x) v_k + P A P never maps tangential cuts off-surface."""
    for _ in range(200):
        n = int(rng.integers(3, 7))
        m = int(rng.integers(1, n - 1))
        normals = np.linalg.qr(rng.normal(size=(n, m)))[0].T
        fr = frame_from_normals(normals)
        sig = float(rng.normal()) * fr.P
        for k in range(m):
            sig += np.outer(normals[k], rng.normal(size=n))
        sig += fr.P @ rng.normal(size=(n, n)) @ fr.P
        assert normal_at_tangential(sig, fr) <= 1e-10


def test_worst_equilibrium_diagnostics_on_projector():
    """P is symmetric and tangential, so only the divergence stays nonzero."""
    case = get_case("sphere")
    diag = worst_equilibrium_diagnostics(
        case.sample_points(4), projector_field(case.geometry), case.geometry, AN
    )
    assert diag["normal_at_tangential"] <= 1e-10
    assert diag["omega_pairing"] <= 1e-10
    assert diag["div_transpose"] > 0.1
