"""Frames, projectors, recursive projection, and the in-plane rotation."""

import numpy as np
import pytest

from tensorcalc.builtins import get_case
from tensorcalc.geometry import (
    GeometryError,
    frame_from_normals,
    is_tangent,
    perp,
    perp_matrix,
    project,
    tangent_basis,
)
from tensorcalc.tensor import Tensor, frobenius, outer, random_tensor


def random_frame(rng, n, m):
    """Orthonormalize m random directions into a synthetic frame."""
    normals = np.linalg.qr(rng.normal(size=(n, m)))[0].T
    return frame_from_normals(normals, x=rng.normal(size=n))


def project_oracle(arr, P):
    """Slot-by-slot projection written as an explicit loop over leaves."""
    out = np.zeros_like(arr)
    for idx in np.ndindex(arr.shape):
        acc = 0.0
        for src in np.ndindex(arr.shape):
            weight = 1.0
            for a, b in zip(idx, src):
                weight *= P[a, b]
            acc += weight * arr[src]
        out[idx] = acc
    return out


def test_sphere_frame():
    geom = get_case("sphere").geometry
    x = np.array([0.6, 0.0, 0.8])
    fr = geom.frame_at(x, 0.0)
    np.testing.assert_allclose(fr.normals[0], x, atol=1e-14)
    np.testing.assert_allclose(fr.P, np.eye(3) - np.outer(x, x), atol=1e-14)
    np.testing.assert_allclose(fr.N + fr.P, np.eye(3), atol=1e-14)


def test_projectors_idempotent_and_orthogonal(rng):
    for m in (1, 2, 3):
        fr = random_frame(rng, 4, m)
        np.testing.assert_allclose(fr.P @ fr.P, fr.P, atol=1e-13)
        np.testing.assert_allclose(fr.N @ fr.N, fr.N, atol=1e-13)
        np.testing.assert_allclose(fr.P @ fr.N, np.zeros((4, 4)), atol=1e-13)
        for nv in fr.normals:
            np.testing.assert_allclose(fr.P @ nv, np.zeros(4), atol=1e-13)


def test_helix_normals_are_orthonormal():
    """The second helix level gradient is not unit length, so this exercises
    the Gram-Schmidt pass inside the frame construction."""
    geom = get_case("helix").geometry
    x = np.array([1.0, 0.0, 0.0])
    fr = geom.frame_at(x, 0.0)
    np.testing.assert_allclose(fr.normals @ fr.normals.T, np.eye(2), atol=1e-12)


def test_projection_matches_brute_force_oracle(rng):
    for q in (1, 2, 3):
        fr = random_frame(rng, 3, 1)
        t = random_tensor(3, q, rng)
        proj = project(fr, t)
        np.testing.assert_allclose(proj.array, project_oracle(t.array, fr.P), atol=1e-12)


def test_projection_idempotent_and_tangent(rng):
    fr = random_frame(rng, 3, 2)
    t = random_tensor(3, 3, rng)
    once = project(fr, t)
    np.testing.assert_allclose(project(fr, once).array, once.array, atol=1e-12)
    assert is_tangent(fr, once)
    assert not is_tangent(fr, outer(Tensor(3, fr.normals[0]), t))


def test_projection_annihilates_normal_factors(rng):
    fr = random_frame(rng, 3, 1)
    nvec = Tensor(3, fr.normals[0])
    t = outer(random_tensor(3, 2, rng), nvec)
    np.testing.assert_allclose(project(fr, t).array, np.zeros((3, 3, 3)), atol=1e-13)


def test_tangential_pairing(rng):
    """frobenius(S, T) = frobenius(S, proj T) whenever S is tangential."""
    fr = random_frame(rng, 4, 2)
    s = project(fr, random_tensor(4, 3, rng))
    t = random_tensor(4, 3, rng)
    np.testing.assert_allclose(frobenius(s, t), frobenius(s, project(fr, t)), atol=1e-12)


def test_tangent_basis_at_sphere_pole():
    geom = get_case("sphere").geometry
    fr = geom.frame_at(np.array([0.0, 0.0, 1.0]), 0.0)
    b1, b2 = tangent_basis(fr)
    np.testing.assert_allclose(b1, np.array([1.0, 0.0, 0.0]), atol=1e-12)
    np.testing.assert_allclose(b2, np.array([0.0, 1.0, 0.0]), atol=1e-12)


def test_tangent_basis_orientation(rng):
    """det [n, b1, b2] > 0 so that (b1, b2, n) is never mirrored."""
    for name in ("sphere", "torus"):
        case = get_case(name)
        for x in case.sample_points(6, seed=11):
            fr = case.geometry.frame_at(x, 0.0)
            b1, b2 = tangent_basis(fr)
            det = np.linalg.det(np.column_stack([fr.normals[0], b1, b2]))
            assert det > 0.5
            np.testing.assert_allclose(b1 @ b2, 0.0, atol=1e-12)
            np.testing.assert_allclose(fr.P @ b1, b1, atol=1e-12)


def test_tangent_basis_needs_two_tangent_dims():
    geom = get_case("circle3d").geometry
    fr = geom.frame_at(np.array([1.0, 0.0, 0.0]), 0.0)
    with pytest.raises(GeometryError):
        tangent_basis(fr)


def test_perp_is_quarter_turn():
    geom = get_case("sphere").geometry
    fr = geom.frame_at(np.array([0.0, 0.0, 1.0]), 0.0)
    np.testing.assert_allclose(perp(fr, [1.0, 0.0, 0.0]), [0.0, 1.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(perp(fr, [0.0, 1.0, 0.0]), [-1.0, 0.0, 0.0], atol=1e-12)


def test_perp_properties(rng):
    case = get_case("torus")
    for x in case.sample_points(5, seed=3):
        fr = case.geometry.frame_at(x, 0.0)
        u = rng.normal(size=3)
        once = perp(fr, u)
        np.testing.assert_allclose(once @ fr.normals[0], 0.0, atol=1e-12)
        np.testing.assert_allclose(once @ (fr.P @ u), 0.0, atol=1e-12)
        np.testing.assert_allclose(perp(fr, once), -fr.P @ u, atol=1e-12)
        np.testing.assert_allclose(np.linalg.norm(once), np.linalg.norm(fr.P @ u), atol=1e-12)


def test_perp_matrix_agrees_with_perp(rng):
    case = get_case("sphere", radius=1.4)
    for x in case.sample_points(5, seed=5):
        fr = case.geometry.frame_at(x, 0.0)
        Q = perp_matrix(fr)
        u = rng.normal(size=3)
        np.testing.assert_allclose(Q @ u, perp(fr, u), atol=1e-12)
        np.testing.assert_allclose(Q @ Q, -fr.P, atol=1e-12)
        np.testing.assert_allclose(Q.T, -Q, atol=1e-12)


def test_frame_derivative_matches_finite_differences():
    geom = get_case("sphere").geometry
    x = np.array([0.6, 0.0, 0.8])
    _, fd = geom.frame_derivative_at(x, 0.0)
    h = 1e-6
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        approx = (geom.frame_at(x + e, 0.0).P - geom.frame_at(x - e, 0.0).P) / (2 * h)
        np.testing.assert_allclose(fd.P_d[:, :, k], approx, atol=1e-8)


def test_frame_outside_tube_raises():
    geom = get_case("sphere").geometry
    with pytest.raises(GeometryError):
        geom.frame_at(np.array([2.0, 0.0, 0.0]), 0.0)


def test_frame_from_normals_rejects_skewed_input():
    skew = np.array([[1.0, 0.0, 0.0], [0.7, 0.7, 0.0]])
    with pytest.raises(GeometryError):
        frame_from_normals(skew)
