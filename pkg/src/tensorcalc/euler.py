"""Incompressible Euler flow on a fixed submanifold, in extrinsic form.

The velocity is a tangential vector field u with scalar pressure p,

    du/dt + (gradcov u) . u = -grad_M p,   div_M u = 0,   u . t = 0 on the boundary.

Everything here is a residual or an integral identity built from those
ingredients; nothing solves the system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import TensorField, polynomial, vector_field
from .geometry import LevelSetGeometry
from .operators import (
    DiffConfig,
    covariant_gradient,
    divergence,
    mean_curvature,
    project_field,
    shape_operator,
    submanifold_gradient,
    time_partial,
)
from .quadrature import Atlas, IdentityResult, integrate, integrate_boundary

__all__ = [
    "EulerState",
    "rigid_rotation_state",
    "extrinsic_momentum",
    "tangent_velocity_identity",
    "momentum_residual",
    "divergence_form_residual",
    "convective_identity_residual",
    "incompressibility",
    "tangency",
    "force_balance",
]


@dataclass
class EulerState:
    geometry: LevelSetGeometry
    velocity: TensorField
    pressure: TensorField


def rigid_rotation_state(geometry: LevelSetGeometry, omega: float = 1.0) -> EulerState:
    """Steady rotation about the z axis on a sphere centered at the origin.

    u = omega e_z x x with p = omega^2 (x^2 + y^2) / 2; a classical steady
    solution, tangential to any origin-centered sphere and to the equator.
    """
    spin = omega * np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    u = vector_field(
        3,
        lambda x, t: spin @ x,
        jacobian=lambda x, t: spin,
        dt=lambda x, t: np.zeros(3),
        name="rigid-rotation",
    )
    p = polynomial(
        3,
        0,
        exponents=[(2, 0, 0), (0, 2, 0)],
        coeffs=[0.5 * omega**2, 0.5 * omega**2],
        name="rotation-pressure",
    )
    return EulerState(geometry=geometry, velocity=u, pressure=p)


def extrinsic_momentum(atlas: Atlas, u: TensorField, t: float = 0.0, rho: float = 1.0):
    """J[u] = rho * componentwise integral of u over the submanifold."""
    return rho * np.asarray(integrate(atlas, u, t))


def tangent_velocity_identity(
    atlas: Atlas, u: TensorField, cfg: DiffConfig, t: float = 0.0
) -> IdentityResult:
    """int P u = -int div_M(P u) x + int_boundary (u.t) x, for any vector field."""
    geom = atlas.geometry
    pu = project_field(u, geom, name="Pu")
    div_pu = divergence(pu, geom, cfg)
    lhs = integrate(atlas, pu, t)
    bulk = integrate(atlas, lambda x, s: -div_pu.values(x, s) * x, t)
    bnd = integrate_boundary(atlas, lambda bp, s: float(u.values(bp.x, s) @ bp.conormal) * bp.x, t)
    rhs = bulk if bnd is None else bulk + bnd
    return IdentityResult(lhs=np.asarray(lhs), rhs=np.asarray(rhs))


def momentum_residual(state: EulerState, x, t: float, cfg: DiffConfig) -> np.ndarray:
    """Pointwise residual of the non-divergence form."""
    geom = state.geometry
    dtu = time_partial(state.velocity, cfg).values(x, t)
    conv = covariant_gradient(state.velocity, geom, cfg).values(x, t) @ state.velocity.values(x, t)
    gp = submanifold_gradient(state.pressure, geom, cfg).values(x, t)
    return dtu + conv + gp


def _flux_field(state: EulerState) -> TensorField:
    from .fields import tf_add, tf_outer
    from .operators import projector_field

    u, p = state.velocity, state.pressure
    pP = tf_outer(p, projector_field(state.geometry), name="pP")
    return tf_add(tf_outer(u, u), pP, name="euler-flux")


def divergence_form_residual(state: EulerState, x, t: float, cfg: DiffConfig) -> np.ndarray:
    """Pointwise residual of du/dt + Proj Div_M (u (x) u + p P) = 0."""
    geom = state.geometry
    dtu = time_partial(state.velocity, cfg).values(x, t)
    divq = divergence(_flux_field(state), geom, cfg).values(x, t)
    frame = geom.frame_at(x, t)
    return dtu + frame.P @ divq


def convective_identity_residual(state: EulerState, x, t: float, cfg: DiffConfig) -> np.ndarray:
    """(gradcov u).u - Proj Div_M(u (x) u); zero whenever div_M u = 0."""
    from .fields import tf_outer

    geom = state.geometry
    u = state.velocity
    conv = covariant_gradient(u, geom, cfg).values(x, t) @ u.values(x, t)
    divuu = divergence(tf_outer(u, u), geom, cfg).values(x, t)
    frame = geom.frame_at(x, t)
    return conv - frame.P @ divuu


def incompressibility(state: EulerState, x, t: float, cfg: DiffConfig) -> float:
    return float(divergence(state.velocity, state.geometry, cfg).values(x, t))


def tangency(state: EulerState, x, t: float = 0.0) -> float:
    frame = state.geometry.frame_at(x, t)
    return float(np.linalg.norm(frame.N @ state.velocity.values(x, t)))


def force_balance(atlas: Atlas, state: EulerState, cfg: DiffConfig, t: float = 0.0) -> IdentityResult:
    """Young-Laplace force + boundary reaction + centripetal force = 0.

    int p kappa + int_boundary p t + sum_i int (B_i(u).u) n_i = 0 for a flow
    satisfying the momentum equation with u tangential to the boundary.
    """
    geom = state.geometry
    u, p = state.velocity, state.pressure
    kap = mean_curvature(geom, cfg)
    young = integrate(atlas, lambda x, s: float(p.values(x, s)) * kap.values(x, s), t)
    reaction = integrate_boundary(atlas, lambda bp, s: float(p.values(bp.x, s)) * bp.conormal, t)
    if reaction is None:
        reaction = np.zeros(geom.n)
    centripetal = np.zeros(geom.n)
    for i in range(geom.m):
        b_i = shape_operator(geom, i, cfg)

        def integrand(x, s, b_i=b_i, i=i):
            uval = u.values(x, s)
            frame = geom.frame_at(x, s)
            return float(uval @ b_i.values(x, s) @ uval) * frame.normals[i]

        centripetal = centripetal + integrate(atlas, integrand, t)
    return IdentityResult(
        lhs=np.asarray(young) + reaction + centripetal,
        rhs=np.zeros(geom.n),
        pieces={"young_laplace": np.asarray(young), "reaction": reaction, "centripetal": centripetal},
    )
