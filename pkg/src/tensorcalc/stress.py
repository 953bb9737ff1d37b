"""Cauchy stress on submanifolds: forces, torques, and equilibrium diagnostics.

The stress sigma is a rank-2 tensor field whose first-slot insertion
sigma(v) gives the stress vector on a cut with orientation v.  Total force
and torque of a patch combine a boundary term (co-normal insertion) with
a curvature term, and equilibrium is characterized by Div_M of the
transpose.  Torques are indexed by the rotation planes {e_i, e_j}.
"""

from __future__ import annotations

from typing import Dict, Sequence, Tuple

import numpy as np

from .fields import TensorField
from .geometry import GeometryFrame, LevelSetGeometry
from .operators import DiffConfig, divergence, mean_curvature
from .quadrature import Atlas, IdentityResult, integrate, integrate_boundary

__all__ = [
    "rotation_generator",
    "omega_field",
    "transpose_field",
    "cross_stress",
    "stress_force",
    "stress_torque",
    "force_residual",
    "torque_equivalence",
    "generator_identity",
    "normal_at_tangential",
    "omega_pairings",
    "equilibrium_diagnostics",
    "worst_equilibrium_diagnostics",
]


def rotation_generator(n: int, i: int, j: int) -> TensorField:
    """l_ij = x_i e_j - x_j e_i, the generator of rotations of the (i, j) plane."""
    if not (0 <= i < j < n):
        raise ValueError(f"need 0 <= i < j < n, got ({i}, {j})")
    jac = np.zeros((n, n))
    jac[j, i] = 1.0
    jac[i, j] = -1.0

    def func(x, t):
        out = np.zeros(n)
        out[j] = x[i]
        out[i] = -x[j]
        return out

    return TensorField(
        n, 1, func, grad=lambda x, t: jac, dt=lambda x, t: np.zeros(n), name=f"l_{i}{j}"
    )


def omega_field(geom: LevelSetGeometry, i: int, j: int) -> TensorField:
    """omega_ij = e_i (x) P_j - e_j (x) P_i built from rows of the projector."""
    n = geom.n

    def func(x, t):
        P = geom.frame_at(x, t).P
        out = np.zeros((n, n))
        out[i] = P[j]
        out[j] = -P[i]
        return out

    grad = None
    if geom.has_analytic_hessians:

        def grad(x, t):
            _, fd = geom.frame_derivative_at(x, t)
            Pd = fd.P_d
            out = np.zeros((n, n, n))
            out[i] = Pd[j]
            out[j] = -Pd[i]
            return out

    return TensorField(n, 2, func, grad=grad, name=f"omega_{i}{j}")


def transpose_field(f: TensorField) -> TensorField:
    if f.q != 2:
        raise ValueError("transpose_field needs a rank-2 field")
    grad = None
    if f.has_gradient:
        grad = lambda x, t: np.swapaxes(f.gradient_values(x, t), 0, 1)
    dt = None
    if f.has_time_derivative:
        dt = lambda x, t: f.dt_values(x, t).T
    return TensorField(
        f.n, 2, lambda x, t: f.values(x, t).T, grad=grad, dt=dt,
        depth=f.depth, name=f"{f.name}^T",
    )


def cross_stress(geom: LevelSetGeometry) -> TensorField:
    """sigma_ab = eps_abk n_k on a surface in R^3.

    Divergence-free and tangential-on-tangential, with zero net force and
    torque on a closed surface; a handy non-symmetric test stress.
    """
    if geom.n != 3 or geom.m != 1:
        raise ValueError("cross_stress is specific to surfaces in R^3")
    eps = np.zeros((3, 3, 3))
    for a, b, c, s in ((0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1), (0, 2, 1, -1), (2, 1, 0, -1), (1, 0, 2, -1)):
        eps[a, b, c] = s

    def func(x, t):
        nvec = geom.frame_at(x, t).normals[0]
        return eps @ nvec

    grad = None
    if geom.has_analytic_hessians:

        def grad(x, t):
            _, fd = geom.frame_derivative_at(x, t)
            return np.tensordot(eps, fd.normals_d[0], axes=([2], [0]))

    return TensorField(3, 2, func, grad=grad, name="cross-stress")


def _insert_first(arr: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.tensordot(arr, v, axes=([0], [0]))


def stress_force(atlas: Atlas, sigma: TensorField, cfg: DiffConfig, t: float = 0.0) -> np.ndarray:
    """F = int_boundary sigma(t) + int sigma(kappa)."""
    geom = atlas.geometry
    kap = mean_curvature(geom, cfg)
    bulk = integrate(atlas, lambda x, s: _insert_first(sigma.values(x, s), kap.values(x, s)), t)
    bnd = integrate_boundary(atlas, lambda bp, s: _insert_first(sigma.values(bp.x, s), bp.conormal), t)
    return np.asarray(bulk) if bnd is None else np.asarray(bulk) + np.asarray(bnd)


def stress_torque(
    atlas: Atlas, sigma: TensorField, plane: Tuple[int, int], cfg: DiffConfig, t: float = 0.0
) -> float:
    """m_K = int_boundary l_K . sigma(t) + int l_K . sigma(kappa)."""
    geom = atlas.geometry
    i, j = plane
    l_k = rotation_generator(geom.n, i, j)
    kap = mean_curvature(geom, cfg)
    bulk = integrate(
        atlas,
        lambda x, s: float(l_k.values(x, s) @ _insert_first(sigma.values(x, s), kap.values(x, s))),
        t,
    )
    bnd = integrate_boundary(
        atlas,
        lambda bp, s: float(l_k.values(bp.x, s) @ _insert_first(sigma.values(bp.x, s), bp.conormal)),
        t,
    )
    return float(bulk) if bnd is None else float(bulk) + float(bnd)


def force_residual(atlas: Atlas, sigma: TensorField, cfg: DiffConfig, t: float = 0.0) -> IdentityResult:
    """F equals the integral of Div_M of the transpose."""
    geom = atlas.geometry
    div_bar = divergence(transpose_field(sigma), geom, cfg)
    return IdentityResult(
        lhs=np.asarray(integrate(atlas, div_bar, t)),
        rhs=stress_force(atlas, sigma, cfg, t),
    )


def torque_equivalence(
    atlas: Atlas, sigma: TensorField, plane: Tuple[int, int], cfg: DiffConfig, t: float = 0.0
) -> IdentityResult:
    """m_K = int l_K . Div_M sigma-bar - int omega_K : sigma-bar."""
    geom = atlas.geometry
    i, j = plane
    l_k = rotation_generator(geom.n, i, j)
    om = omega_field(geom, i, j)
    bar = transpose_field(sigma)
    div_bar = divergence(bar, geom, cfg)
    first = integrate(atlas, lambda x, s: float(l_k.values(x, s) @ div_bar.values(x, s)), t)
    second = integrate(atlas, lambda x, s: float(np.sum(om.values(x, s) * bar.values(x, s))), t)
    return IdentityResult(
        lhs=np.asarray(stress_torque(atlas, sigma, plane, cfg, t)),
        rhs=np.asarray(float(first) - float(second)),
    )


def generator_identity(
    atlas: Atlas, a_field: TensorField, plane: Tuple[int, int], cfg: DiffConfig, t: float = 0.0
) -> IdentityResult:
    """Product-rule identity behind the torque formula, for any rank-2 A:

    int_bnd (l:A).t + int (l:A).kappa = int l . Div_M A - int A : omega.
    """
    geom = atlas.geometry
    i, j = plane
    l_k = rotation_generator(geom.n, i, j)
    om = omega_field(geom, i, j)
    kap = mean_curvature(geom, cfg)
    div_a = divergence(a_field, geom, cfg)

    def la(x, s):
        return _insert_first(a_field.values(x, s), l_k.values(x, s))

    lhs_bulk = integrate(atlas, lambda x, s: float(la(x, s) @ kap.values(x, s)), t)
    lhs_bnd = integrate_boundary(atlas, lambda bp, s: float(la(bp.x, s) @ bp.conormal), t)
    lhs = float(lhs_bulk) + (0.0 if lhs_bnd is None else float(lhs_bnd))
    rhs_first = integrate(atlas, lambda x, s: float(l_k.values(x, s) @ div_a.values(x, s)), t)
    rhs_second = integrate(atlas, lambda x, s: float(np.sum(a_field.values(x, s) * om.values(x, s))), t)
    return IdentityResult(lhs=np.asarray(lhs), rhs=np.asarray(float(rhs_first) - float(rhs_second)))


def normal_at_tangential(sigma_value: np.ndarray, frame: GeometryFrame) -> float:
    """Largest normal response of the stress vector over unit tangential cuts.

    Operator 2-norm of v -> N sigma(P v); zero exactly when every
    tangential orientation produces a tangential stress vector.
    """
    return float(np.linalg.norm(frame.N @ sigma_value.T @ frame.P, 2))


def omega_pairings(sigma_value: np.ndarray, frame: GeometryFrame) -> Dict[Tuple[int, int], float]:
    """omega_K : sigma-bar for each rotation plane K = (i, j).

    Equals the antisymmetric part of sigma-bar P; all pairings vanish iff
    the torque balance imposes no pointwise constraint on sigma.
    """
    barP = sigma_value.T @ frame.P
    n = frame.n
    return {(i, j): float(barP[i, j] - barP[j, i]) for i in range(n) for j in range(i + 1, n)}


def equilibrium_diagnostics(
    sigma: TensorField,
    geom: LevelSetGeometry,
    cfg: DiffConfig,
    x,
    t: float = 0.0,
) -> Dict[str, object]:
    """Pointwise equilibrium measures at x: Div of the transpose, the
    omega pairings per rotation plane, and the normal-at-tangential norm."""
    frame = geom.frame_at(x, t)
    sig = sigma.values(x, t)
    div_bar = divergence(transpose_field(sigma), geom, cfg).values(x, t)
    return {
        "div_transpose": div_bar,
        "omega_pairings": omega_pairings(sig, frame),
        "normal_at_tangential": normal_at_tangential(sig, frame),
    }


def worst_equilibrium_diagnostics(
    points: Sequence[np.ndarray],
    sigma: TensorField,
    geom: LevelSetGeometry,
    cfg: DiffConfig,
    t: float = 0.0,
) -> Dict[str, float]:
    """Equilibrium measures maximized over sample points."""
    worst_div = 0.0
    worst_nat = 0.0
    worst_omega = 0.0
    for x in points:
        d = equilibrium_diagnostics(sigma, geom, cfg, x, t)
        worst_div = max(worst_div, float(np.linalg.norm(d["div_transpose"])))
        worst_nat = max(worst_nat, d["normal_at_tangential"])
        worst_omega = max(worst_omega, max(abs(v) for v in d["omega_pairings"].values()))
    return {
        "div_transpose": worst_div,
        "normal_at_tangential": worst_nat,
        "omega_pairing": worst_omega,
    }
