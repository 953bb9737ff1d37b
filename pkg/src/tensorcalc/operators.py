"""Differential operators on tensor fields over level-set geometries.

Every operator returns a new TensorField whose evaluator closes over the
ingredients, so operators compose (a Laplacian is the divergence of a
gradient field, evaluated wherever the outer stencil lands).  DiffConfig
picks the derivative strategy: centered differences of order 2 or 4, or
analytic providers where both the field and the geometry supply them.

The derivative slot of a gradient is always the deepest (last) axis, so
``grad(F) . v`` is the directional derivative along v.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import geometry as geo
from .fields import TensorField, tf_add, tf_scale
from .geometry import GeometryError, LevelSetGeometry
from .tensor import ShapeError

__all__ = [
    "DiffConfig",
    "DepthError",
    "cartesian_gradient",
    "time_partial",
    "material_derivative",
    "submanifold_gradient",
    "divergence",
    "covariant_gradient",
    "laplacian",
    "covariant_laplacian",
    "surface_curl",
    "rotated_gradient",
    "mean_curvature",
    "shape_operator",
    "projector_field",
    "normal_projector_field",
    "normal_field",
    "project_field",
    "perp_field",
    "projector_rate",
]

_MODES = ("fd2", "fd4", "analytic")


class DepthError(RuntimeError):
    """More nested finite-difference layers than the configuration allows."""


@dataclass(frozen=True)
class DiffConfig:
    """Derivative strategy and step sizes.

    ``hx`` scales with max(1, |x|); nested steps are used whenever the field
    being differentiated already contains finite-difference noise.
    """

    mode: str = "fd2"
    hx: float = 5e-6
    ht: float = 1e-5
    nested_hx: float = 3e-4
    nested_ht: float = 3e-4
    max_depth: int = 3

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        for attr in ("hx", "ht", "nested_hx", "nested_ht"):
            if getattr(self, attr) <= 0:
                raise ValueError(f"{attr} must be positive")

    def with_mode(self, mode: str) -> "DiffConfig":
        return replace(self, mode=mode)

    def spatial_step(self, x: np.ndarray, depth: int) -> float:
        if depth <= 0:
            return self.hx * max(1.0, float(np.linalg.norm(x)))
        return self.nested_hx

    def temporal_step(self, depth: int) -> float:
        return self.ht if depth <= 0 else self.nested_ht


def _fd_order(cfg: DiffConfig) -> int:
    return 2 if cfg.mode == "fd2" else 4


def _bump_depth(f: TensorField, cfg: DiffConfig) -> int:
    if f.depth + 1 > cfg.max_depth:
        raise DepthError(
            f"differentiating '{f.name}' would exceed max nesting depth {cfg.max_depth}"
        )
    return f.depth + 1


# -- ambient derivatives ------------------------------------------------------


def cartesian_gradient(f: TensorField, cfg: DiffConfig) -> TensorField:
    """Ambient gradient; the new derivative slot is the deepest axis."""
    n = f.n
    if cfg.mode == "analytic" and f.has_gradient:
        return TensorField(
            n, f.q + 1, lambda x, t: f.gradient_values(x, t), depth=f.depth,
            name=f"grad({f.name})",
        )
    depth = _bump_depth(f, cfg)
    order = _fd_order(cfg)

    def func(x, t):
        h = cfg.spatial_step(x, f.depth)
        out = np.empty((n,) * f.q + (n,))
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            if order == 2:
                d = (f.values(x + e, t) - f.values(x - e, t)) / (2 * h)
            else:
                d = (
                    -f.values(x + 2 * e, t)
                    + 8 * f.values(x + e, t)
                    - 8 * f.values(x - e, t)
                    + f.values(x - 2 * e, t)
                ) / (12 * h)
            out[..., k] = d
        return out

    return TensorField(n, f.q + 1, func, depth=depth, name=f"grad({f.name})")


def time_partial(f: TensorField, cfg: DiffConfig) -> TensorField:
    if f.has_time_derivative and cfg.mode == "analytic":
        return TensorField(
            f.n, f.q, lambda x, t: f.dt_values(x, t), depth=f.depth, name=f"dt({f.name})"
        )
    if f.has_time_derivative:
        # exact providers are cheap and introduce no noise; use them in FD
        # modes as well (constructors only attach them when exact)
        return TensorField(
            f.n, f.q, lambda x, t: f.dt_values(x, t), depth=f.depth, name=f"dt({f.name})"
        )
    depth = _bump_depth(f, cfg)

    def func(x, t):
        h = cfg.temporal_step(f.depth)
        return (f.values(x, t + h) - f.values(x, t - h)) / (2 * h)

    return TensorField(f.n, f.q, func, depth=depth, name=f"dt({f.name})")


def material_derivative(f: TensorField, w: TensorField, cfg: DiffConfig) -> TensorField:
    """d/dt following the velocity w: time partial plus grad(F) . w."""
    if w.q != 1 or w.n != f.n:
        raise ShapeError("material velocity must be a rank-1 field in the same space")
    g = cartesian_gradient(f, cfg)
    ft = time_partial(f, cfg)

    def func(x, t):
        return ft.values(x, t) + g.values(x, t) @ w.values(x, t)

    return TensorField(
        f.n, f.q, func, depth=max(g.depth, ft.depth), name=f"D({f.name};{w.name})"
    )


# -- geometry-aware first-order operators -------------------------------------


def submanifold_gradient(f: TensorField, geom: LevelSetGeometry, cfg: DiffConfig) -> TensorField:
    """Ambient gradient composed with the tangential projector in the
    derivative slot."""
    g = cartesian_gradient(f, cfg)

    def func(x, t):
        return g.values(x, t) @ geom.frame_at(x, t).P

    return TensorField(f.n, f.q + 1, func, depth=g.depth, name=f"gradM({f.name})")


def divergence(f: TensorField, geom: LevelSetGeometry, cfg: DiffConfig) -> TensorField:
    """Trace of the submanifold gradient over the two deepest slots."""
    if f.q < 1:
        raise ShapeError("divergence needs rank >= 1")
    sg = submanifold_gradient(f, geom, cfg)

    def func(x, t):
        return np.asarray(np.trace(sg.values(x, t), axis1=-2, axis2=-1))

    return TensorField(f.n, f.q - 1, func, depth=sg.depth, name=f"divM({f.name})")


def project_field(f: TensorField, geom: LevelSetGeometry, name: str = "") -> TensorField:
    def func(x, t):
        return geo._project_array(f.values(x, t), geom.frame_at(x, t).normals)

    return TensorField(f.n, f.q, func, depth=f.depth, name=name or f"proj({f.name})")


def covariant_gradient(f: TensorField, geom: LevelSetGeometry, cfg: DiffConfig) -> TensorField:
    return project_field(submanifold_gradient(f, geom, cfg), geom, name=f"gradcov({f.name})")


def laplacian(f: TensorField, geom: LevelSetGeometry, cfg: DiffConfig) -> TensorField:
    """Componentwise Laplace-Beltrami: div_M of grad_M."""
    return divergence(submanifold_gradient(f, geom, cfg), geom, cfg)


def covariant_laplacian(f: TensorField, geom: LevelSetGeometry, cfg: DiffConfig) -> TensorField:
    """Projected divergence of the covariant gradient (Bochner-type)."""
    out = project_field(
        divergence(covariant_gradient(f, geom, cfg), geom, cfg), geom
    )
    out.name = f"lapcov({f.name})"
    return out


# -- frame-derived fields ------------------------------------------------------


def projector_field(geom: LevelSetGeometry) -> TensorField:
    grad = None
    if geom.has_analytic_hessians:
        grad = lambda x, t: geom.frame_derivative_at(x, t)[1].P_d
    return TensorField(
        geom.n, 2, lambda x, t: geom.frame_at(x, t).P, grad=grad, name="P"
    )


def normal_projector_field(geom: LevelSetGeometry) -> TensorField:
    grad = None
    if geom.has_analytic_hessians:
        grad = lambda x, t: geom.frame_derivative_at(x, t)[1].N_d
    return TensorField(
        geom.n, 2, lambda x, t: geom.frame_at(x, t).N, grad=grad, name="N"
    )


def normal_field(geom: LevelSetGeometry, i: int = 0) -> TensorField:
    if not 0 <= i < geom.m:
        raise ShapeError(f"normal index {i} out of range for m={geom.m}")
    grad = None
    if geom.has_analytic_hessians:
        grad = lambda x, t: geom.frame_derivative_at(x, t)[1].normals_d[i]
    return TensorField(
        geom.n, 1, lambda x, t: geom.frame_at(x, t).normals[i], grad=grad, name=f"n_{i}"
    )


def mean_curvature(geom: LevelSetGeometry, cfg: DiffConfig) -> TensorField:
    """Curvature vector: minus the divergence of the tangential projector
    field, one component per ambient axis.  Purely normal."""
    out = tf_scale(divergence(projector_field(geom), geom, cfg), -1.0, name="kappa")
    return out


def shape_operator(geom: LevelSetGeometry, i: int, cfg: DiffConfig) -> TensorField:
    """Submanifold gradient of the i-th unit normal."""
    out = submanifold_gradient(normal_field(geom, i), geom, cfg)
    out.name = f"B_{i}"
    return out


# -- oriented-plane operators (n - m == 2) -------------------------------------


def perp_field(f: TensorField, geom: LevelSetGeometry, cfg: DiffConfig) -> TensorField:
    """Quarter-turn every deepest rank-1 leaf of the field."""
    if geom.n - geom.m != 2:
        raise GeometryError("quarter turn needs codimension n - 2")
    if f.q < 1:
        raise ShapeError("perp needs rank >= 1")

    def func(x, t):
        Q = geo.perp_matrix(geom.frame_at(x, t))
        return np.tensordot(f.values(x, t), Q, axes=([-1], [1]))

    grad = None
    if f.q == 1 and f.has_gradient and geom.has_analytic_hessians and geom.n <= 6:

        def grad(x, t):
            Q, DQ = geom.perp_pack(x, t)
            return Q @ f.gradient_values(x, t) + np.einsum(
                "abk,b->ak", DQ, f.values(x, t)
            )

    return TensorField(f.n, f.q, func, grad=grad, depth=f.depth, name=f"perp({f.name})")


def surface_curl(f: TensorField, geom: LevelSetGeometry, cfg: DiffConfig) -> TensorField:
    """Rank-lowering curl: minus the divergence of the quarter-turned field."""
    out = tf_scale(divergence(perp_field(f, geom, cfg), geom, cfg), -1.0)
    out.name = f"curl({f.name})"
    return out


def rotated_gradient(f: TensorField, geom: LevelSetGeometry, cfg: DiffConfig) -> TensorField:
    """Rank-raising curl: quarter-turn the derivative slot of grad_M."""
    out = perp_field(submanifold_gradient(f, geom, cfg), geom, cfg)
    out.name = f"rotgrad({f.name})"
    return out


# -- evolving-geometry operators ------------------------------------------------


def projector_rate(geom: LevelSetGeometry, w: TensorField, cfg: DiffConfig) -> TensorField:
    """Symmetrized material rate of the normal bundle.

    C[w] = 1/2 sum_i (Dn_i (x) n_i + n_i (x) Dn_i) with D the material
    derivative along w.  Requires unit-gradient (signed-distance) level
    functions; the hypothesis is checked at evaluation points.
    """
    rates = [material_derivative(normal_field(geom, i), w, cfg) for i in range(geom.m)]

    def func(x, t):
        for i, lvl in enumerate(geom.levels):
            gn = float(np.linalg.norm(lvl.gradient(np.asarray(x, dtype=float), t)))
            if abs(gn - 1.0) > 1e-6:
                raise GeometryError(
                    f"projector_rate needs unit level-set gradients; "
                    f"|grad d_{i}| = {gn:.8f} at {x}"
                )
        frame = geom.frame_at(x, t)
        out = np.zeros((geom.n, geom.n))
        for i in range(geom.m):
            dn = rates[i].values(x, t)
            out += 0.5 * (np.outer(dn, frame.normals[i]) + np.outer(frame.normals[i], dn))
        return out

    depth = max(r.depth for r in rates)
    return TensorField(geom.n, 2, func, depth=depth, name="C[w]")
