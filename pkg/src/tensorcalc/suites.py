"""Named verification suites: each one turns a family of identities into
check records with pinned tolerances.

Suites that exercise derivative machinery run every check twice, once in the
configured finite-difference mode and once with analytic frames and field
gradients, so a report shows both the discretization floor and the exact
algebra.  Purely algebraic suites run once.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .builtins import GeometryCase, get_case
from .euler import (
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
from .evolving import (
    dirichlet_rate_fd,
    dirichlet_rate_terms,
    material_consistency,
    reynolds_residual,
)
from .fields import (
    constant,
    coordinate,
    random_polynomial,
    scalar_field,
    tf_add,
    tf_outer,
    tf_scale,
    vector_field,
)
from .geometry import _gram_schmidt, frame_from_normals, project
from .operators import (
    DiffConfig,
    cartesian_gradient,
    covariant_laplacian,
    divergence,
    laplacian,
    material_derivative,
    mean_curvature,
    normal_field,
    perp_field,
    project_field,
    projector_field,
    projector_rate,
    rotated_gradient,
    shape_operator,
    submanifold_gradient,
    surface_curl,
)
from .quadrature import (
    advected_atlas,
    circulation_residual,
    gradient_residual,
    integrate,
    integrate_boundary,
    integration_by_parts,
    path_ftc_residual,
    stokes_residual,
    weak_form,
)
from .report import CheckRecord, VerificationReport, make_bound_check, make_check, make_floor_check
from .stress import (
    cross_stress,
    force_residual,
    generator_identity,
    normal_at_tangential,
    omega_pairings,
    stress_force,
    stress_torque,
    torque_equivalence,
    transpose_field,
)
from .tensor import Tensor, dot, frobenius, outer, random_tensor, scalar

__all__ = [
    "SuiteConfig",
    "SuiteError",
    "SUITE_NAMES",
    "run_suite",
    "suite_names",
]


class SuiteError(ValueError):
    """Raised for an unknown suite or an unsupported suite/geometry pair."""


@dataclass
class SuiteConfig:
    suite: str = "all"
    geometry: Optional[str] = None
    geom_params: Dict[str, float] = field(default_factory=dict)
    order: int = 12
    panels: int = 2
    fd: str = "fd2"
    hx: float = 5e-6
    ht: float = 1e-5
    seed: int = 0
    tol: Dict[str, float] = field(default_factory=dict)

    def diff(self, mode: Optional[str] = None) -> DiffConfig:
        return DiffConfig(mode=mode or self.fd, hx=self.hx, ht=self.ht)

    def tolerance(self, check_id: str, default: float) -> float:
        return float(self.tol.get(check_id, default))

    def case(self, default_name: str, supported: Sequence[str], **defaults) -> GeometryCase:
        """The geometry override applies only when the suite supports it."""
        if self.geometry is None or (self.geometry == default_name and not self.geom_params):
            return get_case(default_name, **defaults)
        if self.geometry not in supported:
            raise SuiteError(
                f"geometry '{self.geometry}' is not supported here "
                f"(supported: {', '.join(sorted(supported))})"
            )
        return get_case(self.geometry, **self.geom_params)

    def echo(self) -> Dict[str, object]:
        return {
            "suite": self.suite,
            "geometry": self.geometry,
            "geom_params": dict(self.geom_params),
            "order": self.order,
            "panels": self.panels,
            "fd": self.fd,
            "hx": self.hx,
            "ht": self.ht,
            "seed": self.seed,
            "tol": {k: float(v) for k, v in self.tol.items()},
        }


def _modes(cfg: SuiteConfig) -> List[str]:
    return [cfg.fd] if cfg.fd == "analytic" else [cfg.fd, "analytic"]


def _pick(mode: str, fd: float, analytic: float) -> float:
    return analytic if mode == "analytic" else fd


def _max_norm(values) -> float:
    return max(float(np.linalg.norm(np.ravel(v))) for v in values)


def _check_result(cfg, check_id, identity, result, tol, measure="rel"):
    details = {k: (float(np.linalg.norm(v)) if np.ndim(v) else float(v))
               for k, v in result.pieces.items()}
    return make_check(
        check_id, identity, result.lhs, result.rhs,
        cfg.tolerance(check_id, tol), measure=measure, details=details,
    )


def _bound(cfg, check_id, identity, value, tol, details=None):
    return make_bound_check(check_id, identity, value, cfg.tolerance(check_id, tol), details)


def _synthetic_frame(rng: np.random.Generator, n: int, m: int):
    raw = rng.standard_normal((m, n))
    normals = _gram_schmidt(list(raw), 1e-8)
    return frame_from_normals(normals)


_SPIN = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def _rotation_field(scale: float = 1.0, name: str = "spin") -> "vector_field":
    mat = scale * _SPIN
    return vector_field(
        3,
        lambda x, t: mat @ x,
        jacobian=lambda x, t: mat,
        dt=lambda x, t: np.zeros(3),
        name=name,
    )


# -- tensor algebra ---------------------------------------------------------------


def suite_tensor_algebra(cfg: SuiteConfig) -> List[CheckRecord]:
    rng = np.random.default_rng(cfg.seed)
    worst = dict.fromkeys(("insert", "mixed", "assoc", "pairing", "roundtrip"), 0.0)
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        q = int(rng.integers(2, 5))
        t = random_tensor(n, q, rng)
        u = rng.standard_normal(n)
        v = rng.standard_normal(n)

        left = t.insert_left(u).insert_right(v)
        right = t.insert_right(v).insert_left(u)
        worst["insert"] = max(worst["insert"], float(np.max(np.abs(left.array - right.array))))

        s = random_tensor(n, q - 1, rng)
        big = random_tensor(n, q, rng)
        contracted = np.tensordot(s.array, big.array, axes=(range(q - 1), range(q - 1)))
        worst["mixed"] = max(
            worst["mixed"], abs(float(contracted @ v) - frobenius(s, big.insert_right(v)))
        )

        # associativity of the contraction product needs a rank >= 2 middle
        mid = random_tensor(n, int(rng.integers(2, 4)), rng)
        r = random_tensor(n, int(rng.integers(1, 4)), rng)
        worst["assoc"] = max(
            worst["assoc"],
            float(np.max(np.abs(dot(dot(t, mid), r).array - dot(t, dot(mid, r)).array))),
        )

        m = int(rng.integers(1, n))
        frame = _synthetic_frame(rng, n, m)
        tang = project(frame, random_tensor(n, q, rng))
        worst["pairing"] = max(
            worst["pairing"], abs(frobenius(tang, big) - frobenius(tang, project(frame, big)))
        )

        rebuilt = np.stack([c.array for c in t.components()])
        worst["roundtrip"] = max(worst["roundtrip"], float(np.max(np.abs(rebuilt - t.array))))

    rows = [
        ("algebra.insertion-commute", "left and right insertion commute", "insert"),
        ("algebra.mixed-contraction", "(S:T).v = S:(T.v)", "mixed"),
        ("algebra.dot-associative", "(T o S) o R = T o (S o R)", "assoc"),
        ("algebra.tangential-pairing", "<S,T> = <S, proj T> for tangential S", "pairing"),
        ("algebra.component-roundtrip", "stacking components rebuilds the tensor", "roundtrip"),
    ]
    return [_bound(cfg, cid, identity, worst[key], 1e-12) for cid, identity, key in rows]


# -- projection -------------------------------------------------------------------


def _project_oracle(arr: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Slot-by-slot definition of the tangential projection, written as the
    raw sum over all index tuples (independent of the recursive routine)."""
    n = P.shape[0]
    q = arr.ndim
    out = np.zeros_like(arr)
    for idx in product(range(n), repeat=q):
        acc = 0.0
        for jdx in product(range(n), repeat=q):
            w = arr[jdx]
            for a in range(q):
                w *= P[idx[a], jdx[a]]
            acc += w
        out[idx] = acc
    return out


def suite_projection(cfg: SuiteConfig) -> List[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 1)
    worst_oracle = worst_idem = worst_slot = worst_kill = worst_grow = 0.0
    for _ in range(60):
        n, m = 3, int(rng.integers(1, 3))
        q = int(rng.integers(1, 4))
        frame = _synthetic_frame(rng, n, m)
        t = random_tensor(n, q, rng)
        pt = project(frame, t)
        worst_oracle = max(
            worst_oracle, float(np.max(np.abs(pt.array - _project_oracle(t.array, frame.P))))
        )
        worst_idem = max(worst_idem, float(np.max(np.abs(project(frame, pt).array - pt.array))))
        for axis in range(q):
            slot = np.tensordot(pt.array, frame.normals[0], axes=([axis], [0]))
            worst_slot = max(worst_slot, float(np.max(np.abs(slot))))
        worst_grow = max(worst_grow, pt.norm() - t.norm())

        pos = int(rng.integers(0, 3))
        factors = [Tensor(n, rng.standard_normal(n)) for _ in range(3)]
        factors[pos] = Tensor(n, frame.normals[int(rng.integers(0, m))])
        chain = outer(outer(factors[0], factors[1]), factors[2])
        worst_kill = max(worst_kill, project(frame, chain).norm())

    sphere = get_case("sphere", radius=1.3)
    for x in sphere.sample_points(4, seed=cfg.seed):
        frame = sphere.geometry.frame_at(x)
        t = random_tensor(3, 3, rng)
        pt = project(frame, t)
        worst_oracle = max(
            worst_oracle, float(np.max(np.abs(pt.array - _project_oracle(t.array, frame.P))))
        )

    return [
        _bound(cfg, "projection.oracle", "recursive projection matches the slotwise sum",
               worst_oracle, 1e-12),
        _bound(cfg, "projection.idempotent", "projecting twice changes nothing",
               worst_idem, 1e-12),
        _bound(cfg, "projection.kills-normal-slots", "any normal slot contracts to zero",
               worst_slot, 1e-12),
        _bound(cfg, "projection.annihilates-normal-factors",
               "outer chains with a normal factor project to zero", worst_kill, 1e-12),
        _bound(cfg, "projection.non-expansive", "projection never grows the Frobenius norm",
               worst_grow, 1e-15),
    ]


# -- differential identities ------------------------------------------------------


def _sphere_curvature(case: GeometryCase):
    r2 = case.params["radius"] ** 2
    return lambda x: 2.0 * np.asarray(x) / r2


def _circle_curvature(case: GeometryCase):
    r2 = case.params["radius"] ** 2
    return lambda x: np.array([x[0], x[1], 0.0]) / r2


def _torus_curvature(case: GeometryCase):
    major, minor = case.params["major"], case.params["minor"]

    def kappa(x):
        s = math.hypot(x[0], x[1])
        a = s - major
        shat = np.array([x[0] / s, x[1] / s, 0.0])
        nhat = (a * shat + x[2] * np.array([0.0, 0.0, 1.0])) / minor
        return (1.0 / minor + a / (minor * s)) * nhat

    return kappa


_CURVATURE_FORMS = {
    "sphere": _sphere_curvature,
    "circle3d": _circle_curvature,
    "torus": _torus_curvature,
}

_N3_GEOMETRIES = ["sphere", "hemisphere", "torus", "plane_disk", "circle3d", "helix"]


def suite_differential(cfg: SuiteConfig) -> List[CheckRecord]:
    case = cfg.case("sphere", _N3_GEOMETRIES)
    geom = case.geometry
    rng = np.random.default_rng(cfg.seed + 2)
    points = case.sample_points(5, seed=cfg.seed)
    f = random_polynomial(3, 0, rng, degree=2)
    g = random_polynomial(3, 0, rng, degree=2)
    u0 = random_polynomial(3, 1, rng, degree=2)
    checks: List[CheckRecord] = []

    for mode in _modes(cfg):
        d = cfg.diff(mode)
        tag = f".{mode}"

        fg = scalar_field(
            3,
            lambda x, t: float(f.values(x, t)) * float(g.values(x, t)),
            grad=lambda x, t: (
                float(f.values(x, t)) * g.gradient_values(x, t)
                + float(g.values(x, t)) * f.gradient_values(x, t)
            ),
            name="fg",
        )
        gfg = submanifold_gradient(fg, geom, d)
        gf = submanifold_gradient(f, geom, d)
        gg = submanifold_gradient(g, geom, d)
        res = [
            gfg.values(x, 0.0)
            - float(f.values(x, 0.0)) * gg.values(x, 0.0)
            - float(g.values(x, 0.0)) * gf.values(x, 0.0)
            for x in points
        ]
        checks.append(_bound(
            cfg, "diff.product-rule" + tag,
            "grad_M(fg) = f grad_M g + g grad_M f",
            _max_norm(res), _pick(mode, 1e-8, 1e-12),
        ))

        fu = vector_field(
            3,
            lambda x, t: float(f.values(x, t)) * u0.values(x, t),
            jacobian=lambda x, t: (
                float(f.values(x, t)) * u0.gradient_values(x, t)
                + np.outer(u0.values(x, t), f.gradient_values(x, t))
            ),
            name="fu",
        )
        divfu = divergence(fu, geom, d)
        divu = divergence(u0, geom, d)
        res = [
            float(divfu.values(x, 0.0))
            - float(f.values(x, 0.0)) * float(divu.values(x, 0.0))
            - float(gf.values(x, 0.0) @ u0.values(x, 0.0))
            for x in points
        ]
        checks.append(_bound(
            cfg, "diff.divergence-product" + tag,
            "div_M(f u) = f div_M u + grad_M f . u",
            _max_norm(res), _pick(mode, 1e-8, 1e-12),
        ))

        ut = project_field(u0, geom, name="Pu")
        gm = submanifold_gradient(ut, geom, d)
        res = []
        for x in points:
            frame = geom.frame_at(x)
            full = gm.values(x, 0.0)
            tang = frame.P @ full @ frame.P
            normal_part = np.zeros_like(full)
            for i in range(geom.m):
                b_i = shape_operator(geom, i, d).values(x, 0.0)
                bu = ut.values(x, 0.0) @ b_i
                normal_part += np.outer(frame.normals[i], bu)
            res.append(full - (tang - normal_part))
        checks.append(_bound(
            cfg, "diff.gauss-split" + tag,
            "grad_M u = cov grad u - sum_i n_i (x) B_i(u) for tangential u",
            _max_norm(res), _pick(mode, 1e-5, 1e-8),
        ))

        if geom.n - geom.m == 2:
            pf_u = perp_field(ut, geom, d)
            pf_uu = perp_field(pf_u, geom, d)
            vt = project_field(random_polynomial(3, 1, rng, degree=1), geom, name="Pv")
            pf_v = perp_field(vt, geom, d)
            rg = rotated_gradient(f, geom, d)
            res_perp, res_anti, res_orth = [], [], []
            for x in points:
                res_perp.append(pf_uu.values(x, 0.0) + ut.values(x, 0.0))
                res_anti.append(
                    float(pf_u.values(x, 0.0) @ vt.values(x, 0.0))
                    + float(ut.values(x, 0.0) @ pf_v.values(x, 0.0))
                )
                res_orth.append(float(rg.values(x, 0.0) @ gf.values(x, 0.0)))
            checks.append(_bound(
                cfg, "diff.perp-involution" + tag,
                "applying the quarter turn twice negates a tangent vector",
                _max_norm(res_perp), 1e-10,
            ))
            checks.append(_bound(
                cfg, "diff.perp-antisymmetry" + tag,
                "u-perp . v = -u . v-perp on the tangent plane",
                _max_norm(res_anti), 1e-10,
            ))
            checks.append(_bound(
                cfg, "diff.rotated-gradient-orthogonal" + tag,
                "the rotated gradient is orthogonal to the gradient",
                _max_norm(res_orth), _pick(mode, 1e-8, 1e-10),
            ))

        lap = laplacian(f, geom, d)
        clap = covariant_laplacian(f, geom, d)
        res = [float(lap.values(x, 0.0)) - float(clap.values(x, 0.0)) for x in points]
        checks.append(_bound(
            cfg, "diff.laplacian-scalar-agree" + tag,
            "both Laplacians coincide on scalars",
            _max_norm(res), 1e-10,
        ))

        for gname, form_for in _CURVATURE_FORMS.items():
            pinned = get_case(gname)
            kap = mean_curvature(pinned.geometry, d)
            form = form_for(pinned)
            rel = []
            for x in pinned.sample_points(4, seed=cfg.seed):
                want = form(np.asarray(x))
                got = kap.values(x, 0.0)
                rel.append(np.linalg.norm(got - want) / max(1.0, np.linalg.norm(want)))
            checks.append(_bound(
                cfg, f"diff.curvature-{gname}" + tag,
                "mean curvature vector matches the closed form",
                max(rel), _pick(mode, 1e-5, 1e-9),
            ))

    return checks


# -- integral identities ----------------------------------------------------------


def suite_stokes(cfg: SuiteConfig) -> List[CheckRecord]:
    d = cfg.diff()
    rng = np.random.default_rng(cfg.seed + 3)
    checks: List[CheckRecord] = []

    hemi = get_case("hemisphere").atlas(cfg.order, cfg.panels)
    ez = constant(3, Tensor(3, np.array([0.0, 0.0, 1.0])), name="e_z")
    res = stokes_residual(hemi, ez, d)
    checks.append(_check_result(
        cfg, "stokes.hemisphere-ez",
        "int div_M e_z = boundary + curvature terms on the upper hemisphere",
        res, 1e-6,
    ))
    checks.append(make_check(
        "stokes.hemisphere-ez-boundary",
        "the equator circulation term of e_z is -2 pi",
        float(res.pieces["boundary"]), -2.0 * math.pi,
        cfg.tolerance("stokes.hemisphere-ez-boundary", 1e-6),
    ))
    checks.append(make_check(
        "stokes.hemisphere-ez-curvature",
        "the curvature term of e_z is +2 pi",
        float(res.pieces["curvature"]), 2.0 * math.pi,
        cfg.tolerance("stokes.hemisphere-ez-curvature", 1e-6),
    ))

    sphere = get_case("sphere").atlas(cfg.order, cfg.panels)
    checks.append(_bound(
        cfg, "stokes.closed-sphere",
        "every term of the divergence identity vanishes on a closed sphere",
        stokes_residual(sphere, _rotation_field(), d).abs_residual, 1e-8,
    ))

    case = cfg.case("torus", _N3_GEOMETRIES)
    generic = case.atlas(cfg.order, cfg.panels)
    checks.append(_check_result(
        cfg, "stokes.rank1-generic",
        "divergence identity for a random covector field",
        stokes_residual(generic, random_polynomial(3, 1, rng, degree=2), d), 1e-6,
    ))
    checks.append(_check_result(
        cfg, "stokes.rank2",
        "divergence identity for a random rank-2 field",
        stokes_residual(hemi, random_polynomial(3, 2, rng, degree=2), d), 1e-6,
    ))

    gres = gradient_residual(hemi, coordinate(3, 2), d)
    checks.append(_check_result(
        cfg, "stokes.gradient-corollary",
        "int grad_M f = boundary + curvature terms, f = z",
        gres, 1e-6,
    ))
    checks.append(make_check(
        "stokes.gradient-corollary-value",
        "int grad_M z over the hemisphere is 4 pi / 3 vertically",
        float(np.asarray(gres.lhs)[2]), 4.0 * math.pi / 3.0,
        cfg.tolerance("stokes.gradient-corollary-value", 1e-6),
    ))

    checks.append(_check_result(
        cfg, "stokes.integration-by-parts",
        "int S : div_M T + int T : grad_M S balances the boundary terms",
        integration_by_parts(
            hemi,
            random_polynomial(3, 1, rng, degree=1),
            random_polynomial(3, 2, rng, degree=2),
            d,
        ),
        1e-5,
    ))

    helix = get_case("helix")
    arc = helix.atlas(cfg.order, cfg.panels)
    worst = 0.0
    for q in (0, 1, 2):
        fq = random_polynomial(3, q, rng, degree=2)
        worst = max(worst, path_ftc_residual(arc, fq, helix.velocity, d).rel_residual)
    checks.append(_bound(
        cfg, "stokes.path-gradient-theorem",
        "line integral of the tangential derivative matches endpoint values",
        worst, 1e-6,
    ))
    return checks


def suite_curl(cfg: SuiteConfig) -> List[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 4)
    supported = ["plane_disk", "hemisphere", "sphere", "torus"]
    case = cfg.case("plane_disk", supported)
    spin = _rotation_field()
    disk = get_case("plane_disk")
    disk_atlas = disk.atlas(cfg.order, cfg.panels)
    sph = get_case("sphere")
    f = random_polynomial(3, 0, rng, degree=2)
    checks: List[CheckRecord] = []

    for mode in _modes(cfg):
        d = cfg.diff(mode)
        tag = f".{mode}"

        curl = surface_curl(spin, disk.geometry, d)
        res = [float(curl.values(x, 0.0)) - 2.0 for x in disk.sample_points(4, seed=cfg.seed)]
        checks.append(_bound(
            cfg, "curl.plane-uniform" + tag,
            "the planar rotation field has constant scalar curl 2",
            _max_norm(res), _pick(mode, 1e-8, 1e-8),
        ))

        cg = surface_curl(submanifold_gradient(f, sph.geometry, d), sph.geometry, d)
        res = [float(cg.values(x, 0.0)) for x in sph.sample_points(4, seed=cfg.seed)]
        checks.append(_bound(
            cfg, "curl.curl-of-gradient" + tag,
            "the surface curl of a tangential gradient vanishes",
            _max_norm(res), _pick(mode, 1e-5, 1e-8),
        ))

    d = cfg.diff()
    res = circulation_residual(disk_atlas, spin, d)
    checks.append(_check_result(
        cfg, "curl.circulation-disk",
        "int curl u over the disk equals the boundary circulation",
        res, 1e-8,
    ))
    checks.append(make_check(
        "curl.circulation-disk-value",
        "the unit-disk circulation of the rotation field is 2 pi",
        float(np.asarray(res.rhs)), 2.0 * math.pi,
        cfg.tolerance("curl.circulation-disk-value", 1e-8),
    ))
    checks.append(_check_result(
        cfg, "curl.circulation-hemisphere",
        "int curl u over the hemisphere equals the equator circulation",
        circulation_residual(get_case("hemisphere").atlas(cfg.order, cfg.panels), spin, d),
        1e-6,
    ))

    sg_disk = submanifold_gradient(f, disk.geometry, d)
    circ = integrate_boundary(
        disk_atlas, lambda bp, t: float(sg_disk.values(bp.x, t) @ bp.tangent)
    )
    checks.append(_bound(
        cfg, "curl.gradient-circulation",
        "a tangential gradient has zero boundary circulation",
        abs(float(circ)), 1e-8,
    ))

    if cfg.geometry in supported and cfg.geometry != "plane_disk":
        checks.append(_check_result(
            cfg, "curl.circulation-generic",
            "curl identity on the requested geometry",
            circulation_residual(case.atlas(cfg.order, cfg.panels), spin, d), 1e-6,
        ))
    return checks


def suite_laplacian(cfg: SuiteConfig) -> List[CheckRecord]:
    case = cfg.case("sphere", ["sphere"])
    geom = case.geometry
    radius = case.params.get("radius", 1.0)
    atlas = case.atlas(cfg.order, cfg.panels)
    points = case.sample_points(4, seed=cfg.seed)
    killing_z = _rotation_field(name="killing-z")
    checks: List[CheckRecord] = []

    for mode in _modes(cfg):
        d = cfg.diff(mode)
        tag = f".{mode}"

        worst = 0.0
        for j in range(3):
            lap = laplacian(coordinate(3, j), geom, d)
            for x in points:
                got = float(lap.values(x, 0.0))
                want = -2.0 * x[j] / radius**2
                worst = max(worst, abs(got - want) / max(1.0, abs(want)))
        checks.append(_bound(
            cfg, "laplacian.coordinate" + tag,
            "coordinates are eigenfunctions: lap_M x_j = -(2/R^2) x_j",
            worst, _pick(mode, 1e-4, 1e-8),
        ))

        if abs(radius - 1.0) < 1e-12:
            clap = covariant_laplacian(killing_z, geom, d)
            res = [clap.values(x, 0.0) + killing_z.values(x, 0.0) for x in points]
            checks.append(_bound(
                cfg, "laplacian.killing" + tag,
                "the rotation field satisfies lap-cov u = -u on the unit sphere",
                _max_norm(res), _pick(mode, 1e-3, 1e-6),
            ))

            forcing = tf_scale(covariant_laplacian(killing_z, geom, d), -1.0, name="-lap u")
            a, ell = weak_form(atlas, killing_z, killing_z, forcing, None, d)
            checks.append(make_check(
                "laplacian.weak-form" + tag,
                "the Dirichlet pairing balances the manufactured load",
                a, ell, cfg.tolerance("laplacian.weak-form" + tag, 1e-4), measure="abs",
            ))
            checks.append(make_check(
                "laplacian.weak-form-energy" + tag,
                "int |grad-cov u|^2 = 8 pi / 3 for the unit rotation field",
                a, 8.0 * math.pi / 3.0,
                cfg.tolerance("laplacian.weak-form-energy" + tag, _pick(mode, 1e-4, 1e-6)),
            ))

    if abs(radius - 1.0) < 1e-12:
        d = cfg.diff()
        killing_x = vector_field(
            3,
            lambda x, t: np.array([0.0, -x[2], x[1]]),
            jacobian=lambda x, t: np.array(
                [[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]
            ),
            name="killing-x",
        )
        a_uv, _ = weak_form(atlas, killing_z, killing_x, None, None, d)
        a_vu, _ = weak_form(atlas, killing_x, killing_z, None, None, d)
        checks.append(make_check(
            "laplacian.weak-symmetric",
            "the Dirichlet pairing is symmetric",
            a_uv, a_vu, cfg.tolerance("laplacian.weak-symmetric", 1e-10), measure="abs",
        ))
        a_uu, _ = weak_form(atlas, killing_z, killing_z, None, None, d)
        checks.append(make_floor_check(
            "laplacian.weak-coercive",
            "the Dirichlet pairing is nonnegative on the diagonal",
            a_uu, -1e-12,
        ))
    return checks


# -- applications -----------------------------------------------------------------


def suite_euler(cfg: SuiteConfig) -> List[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 5)
    case = cfg.case("sphere", ["sphere", "torus"])
    geom = case.geometry
    atlas = case.atlas(cfg.order, cfg.panels)
    points = case.sample_points(4, seed=cfg.seed)
    state = rigid_rotation_state(geom, omega=1.3)
    hemi = get_case("hemisphere")
    hemi_atlas = hemi.atlas(cfg.order, cfg.panels)
    hemi_state = rigid_rotation_state(hemi.geometry, omega=1.3)
    checks: List[CheckRecord] = []

    checks.append(_bound(
        cfg, "euler.tangency",
        "the rotation field is tangential to the surface",
        _max_norm([tangency(state, x) for x in points]), 1e-12,
    ))

    for mode in _modes(cfg):
        d = cfg.diff(mode)
        tag = f".{mode}"

        checks.append(_bound(
            cfg, "euler.momentum" + tag,
            "steady state: du/dt + (grad-cov u).u + grad_M p = 0",
            _max_norm([momentum_residual(state, x, 0.0, d) for x in points]),
            _pick(mode, 1e-5, 1e-8),
        ))
        checks.append(_bound(
            cfg, "euler.divergence-form" + tag,
            "steady state: du/dt + proj div_M(u (x) u + p P) = 0",
            _max_norm([divergence_form_residual(state, x, 0.0, d) for x in points]),
            _pick(mode, 1e-5, 1e-8),
        ))
        checks.append(_bound(
            cfg, "euler.convective-identity" + tag,
            "(grad-cov u).u = proj div_M(u (x) u) for divergence-free u",
            _max_norm([convective_identity_residual(state, x, 0.0, d) for x in points]),
            _pick(mode, 1e-5, 1e-8),
        ))
        checks.append(_bound(
            cfg, "euler.incompressible" + tag,
            "the rotation field is surface divergence free",
            _max_norm([incompressibility(state, x, 0.0, d) for x in points]),
            _pick(mode, 1e-8, 1e-10),
        ))

        flux = tf_add(
            tf_outer(state.velocity, state.velocity),
            tf_outer(state.pressure, projector_field(geom)),
            name="flux",
        )
        divq = divergence(flux, geom, d)
        total = integrate(atlas, lambda x, t: geom.frame_at(x, t).P @ divq.values(x, t))
        checks.append(_bound(
            cfg, "euler.flux-conservation" + tag,
            "the projected momentum flux integrates to zero on a closed surface",
            float(np.linalg.norm(np.asarray(total))), 1e-6,
        ))

        checks.append(_bound(
            cfg, "euler.momentum-integral" + tag,
            "the extrinsic momentum of the rotation field vanishes by symmetry",
            float(np.linalg.norm(extrinsic_momentum(atlas, state.velocity))), 1e-8,
        ))

        checks.append(_check_result(
            cfg, "euler.tangent-velocity" + tag,
            "int P u = -int div_M(P u) x + boundary flux of positions",
            tangent_velocity_identity(hemi_atlas, random_polynomial(3, 1, rng, degree=2), d),
            _pick(mode, 1e-6, 1e-8),
        ))

        fb = force_balance(hemi_atlas, hemi_state, d)
        piece_scale = max(float(np.linalg.norm(np.asarray(v))) for v in fb.pieces.values())
        checks.append(make_check(
            "euler.force-balance" + tag,
            "pressure, boundary reaction and centripetal forces cancel",
            np.asarray(fb.lhs) / piece_scale, np.zeros(3),
            cfg.tolerance("euler.force-balance" + tag, 1e-6), measure="abs",
            details={k: float(np.linalg.norm(np.asarray(v))) for k, v in fb.pieces.items()},
        ))
        checks.append(make_check(
            "euler.force-balance-pressure" + tag,
            "the Young-Laplace force on the rotating hemisphere is w^2 pi / 2",
            float(np.asarray(fb.pieces["young_laplace"])[2]), 1.3**2 * math.pi / 2.0,
            cfg.tolerance("euler.force-balance-pressure" + tag, 1e-6),
        ))
    return checks


def suite_stress(cfg: SuiteConfig) -> List[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 6)
    case = cfg.case("hemisphere", ["hemisphere", "sphere", "torus"])
    atlas = case.atlas(cfg.order, cfg.panels)
    sphere = get_case("sphere")
    sph_atlas = sphere.atlas(cfg.order, cfg.panels)
    sigma = random_polynomial(3, 2, rng, degree=2)
    planes = [(0, 1), (0, 2), (1, 2)]
    checks: List[CheckRecord] = []

    for mode in _modes(cfg):
        d = cfg.diff(mode)
        tag = f".{mode}"

        checks.append(_check_result(
            cfg, "stress.force-residual" + tag,
            "int div_M sigma-bar equals the boundary-plus-curvature force",
            force_residual(atlas, sigma, d), _pick(mode, 1e-6, 1e-8),
        ))

        worst = max(generator_identity(atlas, sigma, k, d).rel_residual for k in planes)
        checks.append(_bound(
            cfg, "stress.generator-identity" + tag,
            "rotation generators satisfy the product-rule torque identity",
            worst, _pick(mode, 1e-6, 1e-8),
        ))

        worst = max(torque_equivalence(atlas, sigma, k, d).rel_residual for k in planes)
        checks.append(_bound(
            cfg, "stress.torque-equivalence" + tag,
            "m_K = int l_K . div_M sigma-bar - int omega_K : sigma-bar",
            worst, _pick(mode, 1e-5, 1e-8),
        ))

        hemi = get_case("hemisphere")
        nn = tf_outer(normal_field(hemi.geometry), normal_field(hemi.geometry), name="nn")
        force = stress_force(hemi.atlas(cfg.order, cfg.panels), nn, d)
        checks.append(make_check(
            "stress.normal-pressure-force" + tag,
            "sigma = n (x) n pushes the hemisphere up with force 2 pi",
            force, np.array([0.0, 0.0, 2.0 * math.pi]),
            cfg.tolerance("stress.normal-pressure-force" + tag, 1e-8),
        ))

        xs = cross_stress(sphere.geometry)
        div_bar = divergence(transpose_field(xs), sphere.geometry, d)
        pts = sphere.sample_points(4, seed=cfg.seed)
        checks.append(_bound(
            cfg, "stress.cross-stress-divfree" + tag,
            "the cross stress is pointwise equilibrated in the bulk",
            _max_norm([div_bar.values(x, 0.0) for x in pts]),
            _pick(mode, 1e-6, 1e-8),
        ))
        checks.append(_bound(
            cfg, "stress.cross-stress-force" + tag,
            "the cross stress exerts no net force on the closed sphere",
            float(np.linalg.norm(stress_force(sph_atlas, xs, d))), 1e-10,
        ))
        checks.append(_bound(
            cfg, "stress.cross-stress-torque" + tag,
            "the cross stress exerts no net torque on the closed sphere",
            max(abs(stress_torque(sph_atlas, xs, k, d)) for k in planes), 1e-10,
        ))

    pts = sphere.sample_points(5, seed=cfg.seed)
    xs = cross_stress(sphere.geometry)
    worst_nat = worst_pair = 0.0
    for x in pts:
        frame = sphere.geometry.frame_at(x)
        sig = xs.values(x, 0.0)
        worst_nat = max(worst_nat, normal_at_tangential(sig, frame))
        worst_pair = max(worst_pair, max(abs(v) for v in omega_pairings(sig, frame).values()))
    checks.append(_bound(
        cfg, "stress.cross-stress-tangential",
        "the cross stress sends tangential cuts to tangential tractions",
        worst_nat, 1e-12,
    ))
    checks.append(make_floor_check(
        "stress.cross-stress-asymmetric",
        "the cross stress keeps a genuinely antisymmetric tangential part",
        worst_pair, 0.5,
    ))

    worst = 0.0
    for x in pts:
        frame = sphere.geometry.frame_at(x)
        w = rng.standard_normal(3)
        sig = np.outer(frame.P @ w, frame.normals[0])
        worst = max(
            worst, abs(normal_at_tangential(sig, frame) - np.linalg.norm(frame.P @ w))
        )
    checks.append(_bound(
        cfg, "stress.contrapositive",
        "sigma = (P w) (x) n has normal-at-tangential response |P w|",
        worst, 1e-12,
    ))

    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 7))
        m = int(rng.integers(1, n))
        frame = _synthetic_frame(rng, n, m)
        sig = float(rng.standard_normal()) * frame.P
        for k in range(m):
            sig = sig + np.outer(frame.normals[k], rng.standard_normal(n))
        sig = sig + frame.P @ rng.standard_normal((n, n)) @ frame.P
        worst = max(worst, normal_at_tangential(sig, frame))
    checks.append(_bound(
        cfg, "stress.constrained-family",
        "pressure-plus-normal-row-plus-tangential stresses stay tangential",
        worst, 1e-10,
    ))
    return checks


def suite_evolving(cfg: SuiteConfig) -> List[CheckRecord]:
    rng = np.random.default_rng(cfg.seed + 7)
    case = cfg.case("expanding_sphere", ["expanding_sphere"], radius=1.0, speed=0.1)
    geom = case.geometry
    radius = case.params["radius"]
    speed = case.params["speed"]
    atlas = case.atlas(max(8, cfg.order - 4), cfg.panels)
    points = case.sample_points(3, seed=cfg.seed)
    w = case.velocity
    spin = 0.7 * _SPIN
    w2 = vector_field(
        3,
        lambda x, t: w.values(x, t) + spin @ x,
        jacobian=lambda x, t: w.gradient_values(x, t) + spin,
        dt=lambda x, t: np.zeros(3),
        name="radial+spin",
    )
    checks: List[CheckRecord] = []

    advected = advected_atlas(atlas, w2, 0.0, 0.05)
    xs, _ = advected.charts[0].points(0.05)
    worst = max(
        float(np.max(np.abs(geom.level_values(x, 0.05))))
        for x in xs[:: max(1, len(xs) // 64)]
    )
    checks.append(_bound(
        cfg, "evolve.material-path",
        "advected chart points stay on the moving surface",
        worst, 1e-6,
    ))

    for mode in _modes(cfg):
        d = cfg.diff(mode)
        tag = f".{mode}"

        area_rate = float(integrate(atlas, divergence(w, geom, d)))
        checks.append(make_check(
            "evolve.area-rate" + tag,
            "int div_M w equals the growth rate 8 pi R c of the sphere area",
            area_rate, 8.0 * math.pi * radius * speed,
            cfg.tolerance("evolve.area-rate" + tag, 1e-6),
        ))

        checks.append(_check_result(
            cfg, "evolve.reynolds-scalar" + tag,
            "transport theorem for the area of the expanding sphere",
            reynolds_residual(atlas, constant(3, scalar(1.0, 3), name="one"), w, d),
            1e-7,
        ))
        checks.append(_check_result(
            cfg, "evolve.reynolds-rank1" + tag,
            "transport theorem for a random vector field on the moving sphere",
            reynolds_residual(atlas, random_polynomial(3, 1, rng, degree=2), w2, d),
            1e-5,
        ))

        nfield = normal_field(geom)
        dn = material_derivative(nfield, w2, d)
        gw2 = cartesian_gradient(w2, d)
        res = [
            dn.values(x, 0.0) + nfield.values(x, 0.0) @ gw2.values(x, 0.0) for x in points
        ]
        checks.append(_bound(
            cfg, "evolve.material-normal" + tag,
            "D n = -n . grad w for advected unit-gradient level sets",
            _max_norm(res), _pick(mode, 1e-6, 1e-8),
        ))

        cw = projector_rate(geom, w2, d)
        dp = material_derivative(projector_field(geom), w2, d)
        res = [dp.values(x, 0.0) + 2.0 * cw.values(x, 0.0) for x in points]
        checks.append(_bound(
            cfg, "evolve.projector-rate" + tag,
            "D P = -2 C[w] along the flow",
            _max_norm(res), _pick(mode, 1e-5, 1e-7),
        ))
        res = []
        for x in points:
            frame = geom.frame_at(x)
            res.append(project(frame, Tensor(3, cw.values(x, 0.0))).array)
        checks.append(_bound(
            cfg, "evolve.projector-rate-tangential" + tag,
            "C[w] has no fully tangential part",
            _max_norm(res), _pick(mode, 1e-6, 1e-8),
        ))

        f1 = random_polynomial(3, 1, rng, degree=2)
        gf = cartesian_gradient(f1, d)
        lhs = cartesian_gradient(material_derivative(f1, w2, d), d)
        rhs = material_derivative(gf, w2, d)
        res = []
        for x in points:
            chain = np.tensordot(gf.values(x, 0.0), gw2.values(x, 0.0), axes=([-1], [0]))
            res.append(lhs.values(x, 0.0) - rhs.values(x, 0.0) - chain)
        checks.append(_bound(
            cfg, "evolve.commutator-cartesian" + tag,
            "grad(D T) - D(grad T) = grad T o grad w",
            _max_norm(res), _pick(mode, 1e-4, 1e-6),
        ))

        slhs = submanifold_gradient(material_derivative(f1, w2, d), geom, d)
        srhs = material_derivative(submanifold_gradient(f1, geom, d), w2, d)
        gmw = submanifold_gradient(w2, geom, d)
        res = []
        for x in points:
            mix = gmw.values(x, 0.0) + 2.0 * cw.values(x, 0.0)
            chain = np.tensordot(gf.values(x, 0.0), mix, axes=([-1], [0]))
            res.append(slhs.values(x, 0.0) - srhs.values(x, 0.0) - chain)
        checks.append(_bound(
            cfg, "evolve.commutator-submanifold" + tag,
            "grad_M(D T) - D(grad_M T) = grad T o (2 C[w] + grad_M w)",
            _max_norm(res), _pick(mode, 1e-4, 1e-6),
        ))

        zfield = coordinate(3, 2)
        terms = dirichlet_rate_terms(atlas, zfield, w, d)
        fd_rate = dirichlet_rate_fd(atlas, zfield, w, d)
        checks.append(make_check(
            "evolve.dirichlet-rank0" + tag,
            "three-term Dirichlet energy rate matches the advected difference",
            terms["total"], fd_rate,
            cfg.tolerance("evolve.dirichlet-rank0" + tag, 1e-4),
            details={k: v for k, v in terms.items() if k != "total"},
        ))
        checks.append(make_check(
            "evolve.dirichlet-rank0-value" + tag,
            "dE/dt = (8 pi / 3) R c for the vertical coordinate",
            terms["total"], 8.0 * math.pi * radius * speed / 3.0,
            cfg.tolerance("evolve.dirichlet-rank0-value" + tag, 1e-5),
        ))

        t2 = project_field(
            constant(3, Tensor(3, np.outer([0.0, 0.0, 1.0], [0.0, 0.0, 1.0])), name="ezez"),
            geom, name="P ezez P",
        )
        terms2 = dirichlet_rate_terms(atlas, t2, w, d)
        fd2_rate = dirichlet_rate_fd(atlas, t2, w, d)
        checks.append(make_check(
            "evolve.dirichlet-rank2" + tag,
            "three-term rate matches the advected difference at rank 2",
            terms2["total"], fd2_rate,
            cfg.tolerance("evolve.dirichlet-rank2" + tag, 1e-3),
        ))

        checks.append(_bound(
            cfg, "evolve.material-consistency" + tag,
            "D T matches a centered difference along RK4 particle paths",
            max(material_consistency(f1, w2, x, 0.0, d) for x in points),
            _pick(mode, 1e-5, 1e-8),
        ))
    return checks


# -- registry and runner ----------------------------------------------------------


SUITES: Dict[str, Callable[[SuiteConfig], List[CheckRecord]]] = {
    "tensor-algebra": suite_tensor_algebra,
    "projection": suite_projection,
    "differential-identities": suite_differential,
    "stokes": suite_stokes,
    "curl": suite_curl,
    "laplacian": suite_laplacian,
    "euler": suite_euler,
    "stress": suite_stress,
    "evolving": suite_evolving,
}

SUITE_NAMES = list(SUITES) + ["all"]


def suite_names() -> List[str]:
    return list(SUITE_NAMES)


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    if cfg.suite not in SUITE_NAMES:
        raise SuiteError(f"unknown suite '{cfg.suite}' (known: {', '.join(SUITE_NAMES)})")
    start = time.perf_counter()
    if cfg.suite == "all":
        checks: List[CheckRecord] = []
        for fn in SUITES.values():
            try:
                checks.extend(fn(cfg))
            except SuiteError:
                if cfg.geometry is None:
                    raise
                # the override does not apply here; run on the suite default
                fallback = SuiteConfig(**{**cfg.__dict__, "geometry": None, "geom_params": {}})
                checks.extend(fn(fallback))
    else:
        checks = SUITES[cfg.suite](cfg)
    return VerificationReport(
        suite=cfg.suite,
        config=cfg.echo(),
        checks=checks,
        wall_time_s=round(time.perf_counter() - start, 3),
    )
