"""Hyperbolic angles, geodesic curvature and Gauss-Bonnet for non-null polygons.

Conventions on a Lorentzian patch:

* orientation is the coordinate orientation ``du ^ dv``; ``omega`` is the unit
  area form ``sqrt|det g| det[a b]``;
* ``perp(w)`` is the unit vector orthogonal to ``w`` with ``omega(w, perp w) > 0``;
* for unit time-like ``u, v`` in the same time cone the angle is the boost
  parameter ``asinh(omega(u, v))``, measured in an orthonormal frame whose
  first vector is time-like; other causal pairs are reduced to this case;
* the geodesic curvature of a unit-speed curve is ``g(nabla_T T, perp T)``.

Riemannian patches use the ordinary signed angle and the classical formula
``int K + oint k + sum(theta) = 2 pi``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._numerics import derivative5
from .minkowski import CausalCharacter
from .patches import Patch

TAU_NULL = 1e-9
NULL_SIDE_RATIO = 0.05


class NullVectorError(ValueError):
    pass


class TimeOrientation(enum.Enum):
    FUTURE = "Future"
    PAST = "Past"
    NA = "NA"


def _g(patch: Patch, p, a, b):
    return np.einsum("...i,...ij,...j->...", a, patch.metric(p), b)


def omega(patch: Patch, p, a, b):
    """Unit area form of the coordinate orientation."""
    det = np.sqrt(np.abs(np.linalg.det(patch.metric(p))))
    return det * (a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0])


@dataclass(frozen=True)
class OrientedTangent:
    """Tangent vector at a parameter point, with its causal data."""

    patch: Patch = field(repr=False)
    point: tuple
    vector: tuple

    @property
    def p(self) -> np.ndarray:
        return np.asarray(self.point, dtype=float)

    @property
    def v(self) -> np.ndarray:
        return np.asarray(self.vector, dtype=float)

    @property
    def square(self) -> float:
        return float(_g(self.patch, self.p, self.v, self.v))

    @property
    def causal(self) -> CausalCharacter:
        q = self.square
        scale = float(np.sum(np.abs(self.patch.metric(self.p)))) * float(self.v @ self.v)
        if abs(q) <= TAU_NULL * max(scale, 1e-300):
            return CausalCharacter.LIGHT_LIKE
        return CausalCharacter.SPACE_LIKE if q > 0 else CausalCharacter.TIME_LIKE

    @property
    def time_orientation(self) -> TimeOrientation:
        if self.causal is not CausalCharacter.TIME_LIKE:
            return TimeOrientation.NA
        sgn = self.patch.future_sign(self.p, self.v)
        return TimeOrientation.FUTURE if sgn > 0 else TimeOrientation.PAST

    def unit(self) -> "OrientedTangent":
        if self.causal is CausalCharacter.LIGHT_LIKE:
            raise NullVectorError("null tangent vector")
        return self._with(self.v / math.sqrt(abs(self.square)))

    def _with(self, vec) -> "OrientedTangent":
        return OrientedTangent(self.patch, self.point, tuple(float(c) for c in vec))

    def __neg__(self):
        return self._with(-self.v)


def tangent(patch: Patch, point, vector) -> OrientedTangent:
    return OrientedTangent(patch, tuple(map(float, point)), tuple(map(float, vector)))


def perp(w: OrientedTangent) -> OrientedTangent:
    """Unit vector orthogonal to ``w`` completing a positively oriented basis."""
    if w.causal is CausalCharacter.LIGHT_LIKE:
        raise NullVectorError("perp of a null vector")
    g = w.patch.metric(w.p)
    gw = g @ w.v
    x = np.array([-gw[1], gw[0]])
    x = x / math.sqrt(abs(float(x @ g @ x)))
    if omega(w.patch, w.p, w.v, x) < 0:
        x = -x
    return w._with(x)


def _lorentzian(patch: Patch, p) -> bool:
    return float(np.linalg.det(patch.metric(p))) < 0


def hyperbolic_angle(u: OrientedTangent, v: OrientedTangent) -> float:
    """Oriented angle from ``u`` to ``v`` at a common point.

    Lorentzian patches use the boost angle with the reductions: opposite time
    cones -> replace ``v`` by ``-v``; two space-like -> their perps; mixed ->
    perp of the space-like argument. Riemannian patches return the signed
    Euclidean angle in ``(-pi, pi]``.
    """
    u, v = u.unit(), v.unit()
    if not _lorentzian(u.patch, u.p):
        g = u.patch.metric(u.p)
        return math.atan2(float(omega(u.patch, u.p, u.v, v.v)), float(u.v @ g @ v.v))
    tl = CausalCharacter.TIME_LIKE
    if u.causal is not tl and v.causal is not tl:
        return hyperbolic_angle(perp(u), perp(v))
    if u.causal is not tl:
        return hyperbolic_angle(perp(u), v)
    if v.causal is not tl:
        return hyperbolic_angle(u, perp(v))
    if u.time_orientation is not v.time_orientation:
        v = -v
    return math.asinh(float(omega(u.patch, u.p, u.v, v.v)))


def angle_asymmetry(u: OrientedTangent, v: OrientedTangent) -> float:
    """``angle[u, v] + angle[v, u]``; reported, not assumed zero, for mixed pairs."""
    return hyperbolic_angle(u, v) + hyperbolic_angle(v, u)


# ----- curves -----------------------------------------------------------------

@dataclass(frozen=True)
class Side:
    """Curve ``c(tau)`` on a patch for ``tau`` in [0, 1].

    ``position``, ``velocity`` and ``acceleration`` map arrays of tau to
    arrays (..., 2). Straight segments are built by :func:`segment`.
    """

    position: Callable
    velocity: Callable
    acceleration: Callable | None = None

    def start(self):
        return np.asarray(self.position(np.array(0.0)), dtype=float)

    def end(self):
        return np.asarray(self.position(np.array(1.0)), dtype=float)


def segment(a, b) -> Side:
    a = np.asarray(a, dtype=float)
    d = np.asarray(b, dtype=float) - a

    def pos(tau):
        return a + np.asarray(tau, float)[..., None] * d

    def vel(tau):
        return np.broadcast_to(d, np.shape(tau) + (2,)).copy()

    def acc(tau):
        return np.zeros(np.shape(tau) + (2,))

    return Side(pos, vel, acc)


def _gauss_legendre(panels: int, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    h = np.diff(edges)
    nodes = (edges[:-1, None] + 0.5 * h[:, None] * (x[None, :] + 1.0)).ravel()
    weights = (0.5 * h[:, None] * w[None, :]).ravel()
    return nodes, weights


def side_causal(patch: Patch, side: Side, samples: int = 33) -> CausalCharacter:
    tau = np.linspace(0.0, 1.0, samples)
    p = side.position(tau)
    c1 = side.velocity(tau)
    q = _g(patch, p, c1, c1)
    scale = np.sum(np.abs(patch.metric(p)), axis=(-2, -1)) * np.sum(c1 * c1, axis=-1)
    if np.any(np.abs(q) <= TAU_NULL * scale) or (np.any(q > 0) and np.any(q < 0)):
        return CausalCharacter.LIGHT_LIKE
    return CausalCharacter.SPACE_LIKE if q[0] > 0 else CausalCharacter.TIME_LIKE


def _acceleration(side: Side, tau):
    if side.acceleration is not None:
        return side.acceleration(tau)
    h = 1e-4
    return (side.velocity(tau + h) - side.velocity(tau - h)) / (2 * h)


def curvature_samples(patch: Patch, side: Side, tau):
    """Geodesic curvature and speed at ``tau``; ``nabla_c' c'`` from Christoffels."""
    p = side.position(tau)
    c1 = side.velocity(tau)
    cov = _acceleration(side, tau) + patch.connection(p, c1, c1)
    g = patch.metric(p)
    speed2 = np.einsum("...i,...ij,...j->...", c1, g, c1)
    speed = np.sqrt(np.abs(speed2))
    gc = np.einsum("...ij,...j->...i", g, c1)
    x = np.stack([-gc[..., 1], gc[..., 0]], -1)
    xn = np.sqrt(np.abs(np.einsum("...i,...ij,...j->...", x, g, x)))
    x = x / xn[..., None]
    x = x * np.sign(omega(patch, p, c1, x))[..., None]
    kappa = np.einsum("...i,...ij,...j->...", cov, g, x) / np.abs(speed2)
    return kappa, speed


def geodesic_curvature_integral(patch: Patch, side: Side, panels: int = 64, order: int = 4) -> float:
    """``int k ds`` along a non-null side by composite Gauss-Legendre quadrature."""
    if side_causal(patch, side) is CausalCharacter.LIGHT_LIKE:
        raise NullVectorError("null boundary piece")
    tau, w = _gauss_legendre(panels, order)
    kappa, speed = curvature_samples(patch, side, tau)
    return float(np.sum(w * kappa * speed))


# ----- parallel transport and the Euler relation --------------------------------

def parallel_transport(patch: Patch, side: Side, Z0, steps: int = 2000):
    """RK4 solution of ``dZ/dtau = -Gamma(c', Z)``; returns (tau, Z)."""
    tau = np.linspace(0.0, 1.0, steps + 1)
    h = 1.0 / steps
    Z = np.empty((steps + 1, 2))
    Z[0] = Z0.v if isinstance(Z0, OrientedTangent) else np.asarray(Z0, dtype=float)

    def f(t, z):
        t = np.array(t)
        return -patch.connection(side.position(t), side.velocity(t), z)

    for i in range(steps):
        t, z = tau[i], Z[i]
        k1 = f(t, z)
        k2 = f(t + 0.5 * h, z + 0.5 * h * k1)
        k3 = f(t + 0.5 * h, z + 0.5 * h * k2)
        k4 = f(t + h, z + h * k3)
        Z[i + 1] = z + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return tau, Z


def euler_angle_check(patch: Patch, side: Side, Z0, steps: int = 2000):
    """Max over samples of ``|phi'(s) + k(s)|`` with ``phi = angle[T, Z]``.

    Returns (defect, skipped) where skipped counts samples at which the
    angle reduction degenerates.
    """
    tau, Z = parallel_transport(patch, side, Z0, steps)
    P = side.position(tau)
    V = side.velocity(tau)
    phi = np.full(len(tau), np.nan)
    skipped = 0
    for i in range(len(tau)):
        try:
            phi[i] = hyperbolic_angle(tangent(patch, P[i], V[i]), tangent(patch, P[i], Z[i]))
        except (NullVectorError, ValueError):
            skipped += 1
    kappa, speed = curvature_samples(patch, side, tau)
    dphi = derivative5(tau, phi) / speed
    defect = np.abs(dphi + kappa)[2:-2]
    return float(np.nanmax(defect)), skipped


def holonomy_angle(patch: Patch, sides: Sequence[Side], Z0, steps: int = 2000) -> float:
    """Angle from Z0 to its parallel transport around a closed chain of sides."""
    z = np.asarray(Z0.v if isinstance(Z0, OrientedTangent) else Z0, dtype=float)
    start = sides[0].start()
    for side in sides:
        _, Z = parallel_transport(patch, side, z, steps)
        z = Z[-1]
    return hyperbolic_angle(tangent(patch, start, Z0.v if isinstance(Z0, OrientedTangent) else Z0),
                            tangent(patch, start, z))


# ----- polygons ---------------------------------------------------------------

@dataclass(frozen=True)
class NonNullPolygon:
    """Closed chain of non-null sides on a patch."""

    patch: Patch = field(repr=False)
    sides: tuple
    causal: tuple

    @property
    def vertices(self):
        return [s.start() for s in self.sides]


def polygon(patch: Patch, vertices, check: bool = True) -> NonNullPolygon:
    """Straight-sided polygon through parameter-space ``vertices``."""
    V = [np.asarray(v, dtype=float) for v in vertices]
    sides = tuple(segment(V[i], V[(i + 1) % len(V)]) for i in range(len(V)))
    return polygon_from_sides(patch, sides, check)


def polygon_from_sides(patch: Patch, sides, check: bool = True) -> NonNullPolygon:
    causal = tuple(side_causal(patch, s) for s in sides)
    if check:
        if any(c is CausalCharacter.LIGHT_LIKE for c in causal):
            raise NullVectorError("null side")
        for a, b in zip(sides, sides[1:] + sides[:1]):
            if np.max(np.abs(a.end() - b.start())) > 1e-12:
                raise ValueError("polygon is not closed")
    return NonNullPolygon(patch, tuple(sides), causal)


def exterior_angles(poly: NonNullPolygon):
    """``theta_j = angle[u_j, t_{j+1}]`` at each vertex."""
    out = []
    n = len(poly.sides)
    for j in range(n):
        a, b = poly.sides[j], poly.sides[(j + 1) % n]
        p = b.start()
        u = tangent(poly.patch, p, a.velocity(np.array(1.0)))
        t = tangent(poly.patch, p, b.velocity(np.array(0.0)))
        out.append(hyperbolic_angle(u, t))
    return out


def _triangle_rule():
    # degree-2 rule with nodes at the edge midpoints
    bary = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
    return bary, np.full(3, 1.0 / 3.0)


def _subdivide(n: int):
    """Barycentric corners of the n^2 congruent sub-triangles of a triangle."""
    tris = []
    for i in range(n):
        for j in range(n - i):
            a = (i, j)
            b = (i + 1, j)
            c = (i, j + 1)
            tris.append((a, b, c))
            if i + j < n - 1:
                tris.append((b, (i + 1, j + 1), c))
    out = np.array([[[1 - (x + y) / n, x / n, y / n] for x, y in t] for t in tris])
    return out


def area_integral(patch: Patch, vertices, integrand: Callable | None = None, level: int = 16):
    """``int f dA`` over a simple polygon by a fan of signed triangles.

    ``integrand`` defaults to the Gaussian curvature of the patch.
    """
    f = integrand or patch.gauss_curvature
    V = np.asarray(vertices, dtype=float)
    c = V.mean(axis=0)
    sub = _subdivide(level)
    bary, wts = _triangle_rule()
    total = 0.0
    for i in range(len(V)):
        P = np.array([c, V[i], V[(i + 1) % len(V)]])
        corners = np.einsum("tkc,cd->tkd", sub, P)
        pts = np.einsum("qk,tkd->tqd", bary, corners)
        e1 = corners[:, 1] - corners[:, 0]
        e2 = corners[:, 2] - corners[:, 0]
        area = 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
        vals = f(pts) * patch.area_element(pts)
        total += float(np.sum(area[:, None] * wts[None, :] * vals))
    x, y = V[:, 0], V[:, 1]
    orient = np.sign(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    return orient * total


@dataclass(frozen=True)
class GaussBonnetReport:
    intK: float
    intKappa: float
    sumTheta: float
    residual: float
    lorentzian: bool

    def as_dict(self):
        return {"intK": self.intK, "intKappa": self.intKappa, "sumTheta": self.sumTheta,
                "residual": self.residual, "lorentzian": self.lorentzian}


def _polygon_level(poly: NonNullPolygon, level: int | None, h: float | None):
    if level is not None:
        return level
    if h is None:
        h = 1e-2
    V = np.asarray(poly.vertices)
    diam = float(np.max(np.linalg.norm(V - V.mean(axis=0), axis=1)))
    return max(1, int(math.ceil(diam / h)))


def gauss_bonnet_residual(poly: NonNullPolygon, h: float | None = None,
                          level: int | None = None) -> GaussBonnetReport:
    """Terms of ``-int K dA + oint k ds + sum theta`` (Lorentzian) or ``int K + oint k + sum theta - 2 pi``.

    ``h`` is the quadrature cell size in parameter space.
    """
    n = _polygon_level(poly, level, h)
    intK = area_integral(poly.patch, poly.vertices, level=n)
    kap = sum(geodesic_curvature_integral(poly.patch, s, panels=n) for s in poly.sides)
    theta = float(sum(exterior_angles(poly)))
    lor = _lorentzian(poly.patch, poly.vertices[0])
    res = -intK + kap + theta if lor else intK + kap + theta - 2.0 * math.pi
    return GaussBonnetReport(intK, kap, theta, res, lor)


def random_polygon(patch: Patch, rng: np.random.Generator, center, radius: float,
                   sides: tuple = (3, 6), tries: int = 200) -> NonNullPolygon:
    """Random star-shaped polygon about ``center`` whose sides keep away from null directions."""
    c = np.asarray(center, dtype=float)
    for _ in range(tries):
        n = int(rng.integers(sides[0], sides[1] + 1))
        ang = np.sort(rng.uniform(0.0, 2 * np.pi, n))
        if np.max(np.diff(np.concatenate([ang, ang[:1] + 2 * np.pi]))) >= np.pi:
            continue
        rad = radius * rng.uniform(0.4, 1.0, n)
        V = c + rad[:, None] * np.stack([np.cos(ang), np.sin(ang)], -1)
        if _far_from_null(patch, V):
            return polygon(patch, V)
    raise RuntimeError("could not draw a non-null polygon")


def _far_from_null(patch: Patch, V) -> bool:
    lor = _lorentzian(patch, V[0])
    for i in range(len(V)):
        d = V[(i + 1) % len(V)] - V[i]
        tau = np.linspace(0.0, 1.0, 17)
        p = V[i] + tau[:, None] * d
        g = patch.metric(p)
        det = np.linalg.det(g)
        if np.any(det >= 0) if lor else np.any(det <= 0):
            return False
        q = np.einsum("i,nij,j->n", d, g, d)
        scale = np.linalg.norm(g, axis=(1, 2)) * float(d @ d)
        if np.any(np.abs(q) < NULL_SIDE_RATIO * scale) or (np.any(q > 0) and np.any(q < 0)):
            return False
    return True
