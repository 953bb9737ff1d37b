"""Ready-made geometries with analytic level sets and quadrature atlases.

Every case bundles a LevelSetGeometry (with exact gradients and Hessians),
a chart atlas factory, and where meaningful a distinguished velocity field.
Level functions are signed distances wherever that is cheap to write down,
so the unit-gradient hypothesis of the projector-rate machinery holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .fields import TensorField, vector_field
from .geometry import LevelSet, LevelSetGeometry
from .quadrature import Atlas, Chart

__all__ = [
    "GeometryCase",
    "sphere",
    "hemisphere",
    "circle2d",
    "circle3d",
    "plane_disk",
    "torus",
    "helix",
    "expanding_sphere",
    "REGISTRY",
    "get_case",
    "available",
]

TWO_PI = 2.0 * math.pi


@dataclass
class GeometryCase:
    """A named geometry plus everything the verification suites need."""

    name: str
    geometry: LevelSetGeometry
    atlas_factory: Callable[[int, int], Atlas]
    manifold_dim: int
    closed: bool
    params: Dict[str, float] = field(default_factory=dict)
    velocity: Optional[TensorField] = None
    blurb: str = ""

    def atlas(self, order: int = 16, panels: int = 2) -> Atlas:
        return self.atlas_factory(order, panels)

    def sample_points(self, count: int, t: float = 0.0, seed: int = 0) -> List[np.ndarray]:
        """Deterministic points spread over the charts, kept off chart edges."""
        rng = np.random.default_rng(seed)
        charts = self.atlas().charts
        pts = []
        for i in range(count):
            c = charts[i % len(charts)]
            u = c.lo + (c.hi - c.lo) * (0.1 + 0.8 * rng.random(c.p))
            pts.append(np.asarray(c.mapping(u, t), dtype=float))
        return pts


def _sphere_level(radius: float, speed: float = 0.0) -> LevelSet:
    def value(x, t):
        return float(np.linalg.norm(x)) - (radius + speed * t)

    def gradient(x, t):
        r = np.linalg.norm(x)
        return x / r

    def hessian(x, t):
        r = np.linalg.norm(x)
        xh = x / r
        return (np.eye(x.shape[0]) - np.outer(xh, xh)) / r

    return LevelSet(value, gradient, hessian)


def _sphere_chart(radius, order, panels, theta_hi=math.pi, sides=(), rate=0.0):
    def mapping(u, t):
        r = radius + rate * t
        th, ph = u
        return np.array(
            [r * math.sin(th) * math.cos(ph), r * math.sin(th) * math.sin(ph), r * math.cos(th)]
        )

    def jacobian(u, t):
        r = radius + rate * t
        th, ph = u
        st, ct = math.sin(th), math.cos(th)
        sp, cp = math.sin(ph), math.cos(ph)
        return np.array([[r * ct * cp, -r * st * sp], [r * ct * sp, r * st * cp], [-r * st, 0.0]])

    return Chart(
        lo=[0.0, 0.0],
        hi=[theta_hi, TWO_PI],
        mapping=mapping,
        jacobian=jacobian,
        periodic=(False, True),
        order=order,
        panels=panels,
        boundary_sides=sides,
        name="polar",
    )


def sphere(radius: float = 1.0) -> GeometryCase:
    geom = LevelSetGeometry(3, [_sphere_level(radius)], name="sphere")
    return GeometryCase(
        name="sphere",
        geometry=geom,
        atlas_factory=lambda order=16, panels=2: Atlas(
            geom, [_sphere_chart(radius, order, panels)], name="sphere"
        ),
        manifold_dim=2,
        closed=True,
        params={"radius": radius},
        blurb="round sphere |x| = R in R^3",
    )


def hemisphere(radius: float = 1.0) -> GeometryCase:
    geom = LevelSetGeometry(3, [_sphere_level(radius)], name="hemisphere")
    return GeometryCase(
        name="hemisphere",
        geometry=geom,
        atlas_factory=lambda order=16, panels=2: Atlas(
            geom,
            [_sphere_chart(radius, order, panels, theta_hi=0.5 * math.pi, sides=((0, 1),))],
            name="hemisphere",
        ),
        manifold_dim=2,
        closed=False,
        params={"radius": radius},
        blurb="upper half of the sphere, boundary at the equator",
    )


def circle2d(radius: float = 1.0) -> GeometryCase:
    geom = LevelSetGeometry(2, [_sphere_level(radius)], name="circle2d")

    def factory(order=16, panels=2):
        chart = Chart(
            lo=[0.0],
            hi=[TWO_PI],
            mapping=lambda u, t: radius * np.array([math.cos(u[0]), math.sin(u[0])]),
            jacobian=lambda u, t: radius * np.array([[-math.sin(u[0])], [math.cos(u[0])]]),
            periodic=(True,),
            order=order,
            panels=panels,
            name="angle",
        )
        return Atlas(geom, [chart], name="circle2d")

    return GeometryCase(
        name="circle2d",
        geometry=geom,
        atlas_factory=factory,
        manifold_dim=1,
        closed=True,
        params={"radius": radius},
        blurb="circle |x| = R in the plane",
    )


def _cylinder_level(radius: float) -> LevelSet:
    def value(x, t):
        return math.hypot(x[0], x[1]) - radius

    def gradient(x, t):
        rho = math.hypot(x[0], x[1])
        return np.array([x[0] / rho, x[1] / rho, 0.0])

    def hessian(x, t):
        rho = math.hypot(x[0], x[1])
        rh = np.array([x[0] / rho, x[1] / rho, 0.0])
        pxy = np.diag([1.0, 1.0, 0.0])
        return (pxy - np.outer(rh, rh)) / rho

    return LevelSet(value, gradient, hessian)


def _coordinate_plane_level(axis: int = 2) -> LevelSet:
    e = np.zeros(3)
    e[axis] = 1.0
    zero = np.zeros((3, 3))
    return LevelSet(lambda x, t: float(x[axis]), lambda x, t: e, lambda x, t: zero)


def circle3d(radius: float = 1.0) -> GeometryCase:
    geom = LevelSetGeometry(
        3, [_cylinder_level(radius), _coordinate_plane_level(2)], name="circle3d"
    )

    def factory(order=16, panels=2):
        chart = Chart(
            lo=[0.0],
            hi=[TWO_PI],
            mapping=lambda u, t: radius * np.array([math.cos(u[0]), math.sin(u[0]), 0.0]),
            jacobian=lambda u, t: radius * np.array(
                [[-math.sin(u[0])], [math.cos(u[0])], [0.0]]
            ),
            periodic=(True,),
            order=order,
            panels=panels,
            name="angle",
        )
        return Atlas(geom, [chart], name="circle3d")

    return GeometryCase(
        name="circle3d",
        geometry=geom,
        atlas_factory=factory,
        manifold_dim=1,
        closed=True,
        params={"radius": radius},
        blurb="circle of codimension two: cylinder rho = R meets the plane z = 0",
    )


def plane_disk(radius: float = 1.0) -> GeometryCase:
    geom = LevelSetGeometry(3, [_coordinate_plane_level(2)], name="plane_disk")

    def factory(order=16, panels=2):
        chart = Chart(
            lo=[0.0, 0.0],
            hi=[radius, TWO_PI],
            mapping=lambda u, t: np.array(
                [u[0] * math.cos(u[1]), u[0] * math.sin(u[1]), 0.0]
            ),
            jacobian=lambda u, t: np.array(
                [
                    [math.cos(u[1]), -u[0] * math.sin(u[1])],
                    [math.sin(u[1]), u[0] * math.cos(u[1])],
                    [0.0, 0.0],
                ]
            ),
            periodic=(False, True),
            order=order,
            panels=panels,
            boundary_sides=((0, 1),),
            name="disk",
        )
        return Atlas(geom, [chart], name="plane_disk")

    return GeometryCase(
        name="plane_disk",
        geometry=geom,
        atlas_factory=factory,
        manifold_dim=2,
        closed=False,
        params={"radius": radius},
        blurb="flat disk of radius R in the plane z = 0",
    )


def torus(major: float = 2.0, minor: float = 0.5) -> GeometryCase:
    if not 0 < minor < major:
        raise ValueError("need 0 < minor < major for a torus")

    def value(x, t):
        s = math.hypot(x[0], x[1])
        return math.hypot(s - major, x[2]) - minor

    def gradient(x, t):
        s = math.hypot(x[0], x[1])
        a = s - major
        w = math.hypot(a, x[2])
        sh = np.array([x[0] / s, x[1] / s, 0.0])
        return (a * sh + x[2] * np.array([0.0, 0.0, 1.0])) / w

    def hessian(x, t):
        # distance to the core circle; curvature splits into the azimuthal
        # direction (radius s from the axis) and the in-plane quarter-turn
        s = math.hypot(x[0], x[1])
        a = s - major
        w = math.hypot(a, x[2])
        sh = np.array([x[0] / s, x[1] / s, 0.0])
        th = np.array([-x[1] / s, x[0] / s, 0.0])
        v = (-x[2] * sh + a * np.array([0.0, 0.0, 1.0])) / w
        return (np.outer(v, v) + (a / s) * np.outer(th, th)) / w

    geom = LevelSetGeometry(3, [LevelSet(value, gradient, hessian)], name="torus")

    def factory(order=16, panels=2):
        def mapping(u, t):
            psi, phi = u
            s = major + minor * math.cos(psi)
            return np.array([s * math.cos(phi), s * math.sin(phi), minor * math.sin(psi)])

        def jacobian(u, t):
            psi, phi = u
            s = major + minor * math.cos(psi)
            return np.array(
                [
                    [-minor * math.sin(psi) * math.cos(phi), -s * math.sin(phi)],
                    [-minor * math.sin(psi) * math.sin(phi), s * math.cos(phi)],
                    [minor * math.cos(psi), 0.0],
                ]
            )

        chart = Chart(
            lo=[0.0, 0.0],
            hi=[TWO_PI, TWO_PI],
            mapping=mapping,
            jacobian=jacobian,
            periodic=(True, True),
            order=order,
            panels=panels,
            name="torus-angles",
        )
        return Atlas(geom, [chart], name="torus")

    return GeometryCase(
        name="torus",
        geometry=geom,
        atlas_factory=factory,
        manifold_dim=2,
        closed=True,
        params={"major": major, "minor": minor},
        blurb="torus of revolution around the z axis",
    )


def helix(radius: float = 1.0, pitch: float = 0.25, turns: float = 1.5) -> GeometryCase:
    """Helical arc of codimension two: cylinder rho = a meets b*theta = z.

    The angle is unwrapped near the curve so the second level function is
    smooth inside the tube; its gradient is not unit, which exercises the
    normalization built into the frame construction.
    """
    if pitch <= 0:
        raise ValueError("pitch must be positive")
    a, b = radius, pitch

    def theta_at(x):
        phi = math.atan2(x[1], x[0])
        return phi + TWO_PI * round((x[2] / b - phi) / TWO_PI)

    def value(x, t):
        return b * theta_at(x) - x[2]

    def gradient(x, t):
        rho2 = x[0] ** 2 + x[1] ** 2
        return np.array([-b * x[1] / rho2, b * x[0] / rho2, -1.0])

    def hessian(x, t):
        rho4 = (x[0] ** 2 + x[1] ** 2) ** 2
        hxx = 2 * x[0] * x[1]
        hxy = x[1] ** 2 - x[0] ** 2
        return b * np.array([[hxx, hxy, 0.0], [hxy, -hxx, 0.0], [0.0, 0.0, 0.0]]) / rho4

    geom = LevelSetGeometry(
        3, [_cylinder_level(a), LevelSet(value, gradient, hessian)], name="helix"
    )

    def tangent(x, t):
        v = np.array([-x[1], x[0], b])
        return v / np.linalg.norm(v)

    def tangent_jac(x, t):
        v = np.array([-x[1], x[0], b])
        g = np.linalg.norm(v)
        A = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        dg = np.array([x[0], x[1], 0.0]) / g
        return A / g - np.outer(v, dg) / g**2

    w = vector_field(3, tangent, jacobian=tangent_jac, dt=lambda x, t: np.zeros(3), name="helix-tangent")

    theta_max = TWO_PI * turns

    def factory(order=16, panels=2):
        chart = Chart(
            lo=[0.0],
            hi=[theta_max],
            mapping=lambda u, t: np.array(
                [a * math.cos(u[0]), a * math.sin(u[0]), b * u[0]]
            ),
            jacobian=lambda u, t: np.array(
                [[-a * math.sin(u[0])], [a * math.cos(u[0])], [b]]
            ),
            order=order,
            panels=panels,
            boundary_sides=((0, 0), (0, 1)),
            name="arc",
        )
        return Atlas(geom, [chart], name="helix")

    return GeometryCase(
        name="helix",
        geometry=geom,
        atlas_factory=factory,
        manifold_dim=1,
        closed=False,
        params={"radius": radius, "pitch": pitch, "turns": turns},
        velocity=w,
        blurb="open helical arc with endpoint boundary",
    )


def expanding_sphere(radius: float = 1.0, speed: float = 0.25) -> GeometryCase:
    geom = LevelSetGeometry(
        3,
        [_sphere_level(radius, speed)],
        time_dependent=True,
        name="expanding_sphere",
    )

    def vel(x, t):
        return speed * x / np.linalg.norm(x)

    def vel_jac(x, t):
        r = np.linalg.norm(x)
        xh = x / r
        return speed * (np.eye(3) - np.outer(xh, xh)) / r

    w = vector_field(3, vel, jacobian=vel_jac, dt=lambda x, t: np.zeros(3), name="radial")

    return GeometryCase(
        name="expanding_sphere",
        geometry=geom,
        atlas_factory=lambda order=16, panels=2: Atlas(
            geom, [_sphere_chart(radius, order, panels, rate=speed)], name="expanding_sphere"
        ),
        manifold_dim=2,
        closed=True,
        params={"radius": radius, "speed": speed},
        velocity=w,
        blurb="sphere with radius R + c t, material velocity c along the outward normal",
    )


REGISTRY: Dict[str, Callable[..., GeometryCase]] = {
    "sphere": sphere,
    "hemisphere": hemisphere,
    "circle2d": circle2d,
    "circle3d": circle3d,
    "plane_disk": plane_disk,
    "torus": torus,
    "helix": helix,
    "expanding_sphere": expanding_sphere,
}


def get_case(name: str, **params: float) -> GeometryCase:
    try:
        factory = REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise KeyError(f"unknown geometry '{name}' (known: {known})") from None
    return factory(**params)


def available() -> List[str]:
    return sorted(REGISTRY)
