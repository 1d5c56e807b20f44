"""Lorentz-Minkowski 3-space: charts, inner products, rotation groups, orbits.

Coordinates always travel with a :class:`Chart` that fixes the metric matrix,
so a vector written in the null basis can never be silently contracted with
the orthonormal metric.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

TAU_CAUSAL = 1e-9
TAU_REGION = 1e-12
ISOMETRY_TOL = 1e-12


class ChartKind(enum.Enum):
    ORTHONORMAL = "Orthonormal"
    NULL_BASIS = "NullBasis"


class AxisKind(enum.Enum):
    A1 = "A1"  # time-like axis, elliptic rotations
    A2 = "A2"  # space-like axis, hyperbolic rotations
    A3 = "A3"  # light-like axis, parabolic rotations


class CausalCharacter(enum.Enum):
    SPACE_LIKE = "SpaceLike"
    TIME_LIKE = "TimeLike"
    LIGHT_LIKE = "LightLike"


class RegionLabel(enum.Enum):
    R_PLUS = "RPlus"
    R_MINUS = "RMinus"
    Q_PLUS = "QPlus"
    Q_MINUS = "QMinus"
    DEGENERATE_PLANE = "DegeneratePlane"
    S_PLUS = "SPlus"
    S_MINUS = "SMinus"
    T_PLANE = "TPlane"
    EXTERIOR = "Exterior"
    AXIS = "Axis"


class ChartMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    """Coordinate chart of L^3 with its full metric matrix."""

    name: str
    kind: ChartKind
    metric_entries: tuple = field(repr=False)

    @property
    def metric(self) -> np.ndarray:
        return np.array(self.metric_entries, dtype=float).reshape(3, 3)


# x time-like; used for the elliptic group
CHART_A1 = Chart("A1", ChartKind.ORTHONORMAL, (-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0))
# x space-like, z time-like; used for the hyperbolic group
CHART_A2 = Chart("A2", ChartKind.ORTHONORMAL, (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0))
# g = -2 dx dy + dz^2; used for the parabolic group
CHART_A3 = Chart("A3", ChartKind.NULL_BASIS, (0.0, -1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0))

_CHARTS = {AxisKind.A1: CHART_A1, AxisKind.A2: CHART_A2, AxisKind.A3: CHART_A3}


def chart_for(kind: AxisKind) -> Chart:
    return _CHARTS[AxisKind(kind)]


@dataclass(frozen=True)
class MVec3:
    """A point or vector of L^3 tagged with its chart."""

    coords: tuple
    chart: Chart = CHART_A2

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        if len(c) != 3:
            raise ValueError("MVec3 needs exactly three coordinates")
        object.__setattr__(self, "coords", c)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    def __add__(self, other: "MVec3") -> "MVec3":
        _same_chart(self, other)
        return MVec3(self.array + other.array, self.chart)

    def __sub__(self, other: "MVec3") -> "MVec3":
        _same_chart(self, other)
        return MVec3(self.array - other.array, self.chart)

    def __mul__(self, k: float) -> "MVec3":
        return MVec3(self.array * k, self.chart)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Isometry3:
    matrix: np.ndarray
    chart: Chart

    def apply(self, v: MVec3) -> MVec3:
        if v.chart != self.chart:
            raise ChartMismatch("isometry and vector live in different charts")
        return MVec3(self.matrix @ v.array, self.chart)

    def __matmul__(self, other: "Isometry3") -> "Isometry3":
        if other.chart != self.chart:
            raise ChartMismatch("cannot compose isometries from different charts")
        return Isometry3(self.matrix @ other.matrix, self.chart)

    def is_isometry(self, tol: float = ISOMETRY_TOL) -> bool:
        G = self.chart.metric
        return bool(np.max(np.abs(self.matrix.T @ G @ self.matrix - G)) <= tol)


def _same_chart(u: MVec3, v: MVec3) -> None:
    if u.chart != v.chart:
        raise ChartMismatch(f"chart mismatch: {u.chart.name} vs {v.chart.name}")


def dot(G: np.ndarray, u, v) -> np.ndarray:
    """Batched ``u^T G v`` over the last axis."""
    return np.einsum("...i,ij,...j->...", u, G, v)


def lorentz_dot(u: MVec3, v: MVec3) -> float:
    _same_chart(u, v)
    return float(dot(u.chart.metric, u.array, v.array))


def causal_character(v: MVec3, tau_causal: float = TAU_CAUSAL) -> CausalCharacter:
    """Classify ``v`` by the sign of <v,v>, relative to its Euclidean size."""
    a = v.array
    scale = float(a @ a)
    if scale == 0.0:
        raise ValueError("the zero vector has no causal character")
    q = lorentz_dot(v, v)
    if abs(q) <= tau_causal * scale:
        return CausalCharacter.LIGHT_LIKE
    return CausalCharacter.SPACE_LIKE if q > 0 else CausalCharacter.TIME_LIKE


def cross_array(G: np.ndarray, u, v) -> np.ndarray:
    """Batched Lorentz cross product: <u^v, a> = det(u, v, a) for every a."""
    return np.einsum("ij,...j->...i", np.linalg.inv(G), np.cross(u, v))


def lorentz_cross(u: MVec3, v: MVec3) -> MVec3:
    _same_chart(u, v)
    return MVec3(cross_array(u.chart.metric, u.array, v.array), u.chart)


def generator(kind: AxisKind) -> np.ndarray:
    """Infinitesimal generator L with rotation(kind, t) = expm(t L)."""
    kind = AxisKind(kind)
    if kind is AxisKind.A1:
        return np.array([[0.0, 0, 0], [0, 0, -1], [0, 1, 0]])
    if kind is AxisKind.A2:
        return np.array([[0.0, 0, 0], [0, 0, 1], [0, 1, 0]])
    return np.array([[0.0, 0, 1], [0, 0, 0], [0, 1, 0]])


def rotation_matrix(kind: AxisKind, t) -> np.ndarray:
    """Rotation matrices for scalar or array ``t``; shape ``t.shape + (3, 3)``."""
    kind = AxisKind(kind)
    t = np.asarray(t, dtype=float)
    M = np.zeros(t.shape + (3, 3))
    M[..., 0, 0] = 1.0
    if kind is AxisKind.A1:
        c, s = np.cos(t), np.sin(t)
        M[..., 1, 1], M[..., 1, 2], M[..., 2, 1], M[..., 2, 2] = c, -s, s, c
    elif kind is AxisKind.A2:
        c, s = np.cosh(t), np.sinh(t)
        M[..., 1, 1], M[..., 1, 2], M[..., 2, 1], M[..., 2, 2] = c, s, s, c
    else:
        M[..., 0, 1], M[..., 0, 2] = 0.5 * t * t, t
        M[..., 1, 1], M[..., 2, 1], M[..., 2, 2] = 1.0, t, 1.0
    return M


def rotation(kind: AxisKind, t: float) -> Isometry3:
    """The one-parameter rotation group element about the axis <x>."""
    return Isometry3(rotation_matrix(kind, float(t)), chart_for(kind))


def fundamental_region(p: MVec3, kind: AxisKind, tau: float = TAU_REGION) -> RegionLabel:
    kind = AxisKind(kind)
    if p.chart != chart_for(kind):
        raise ChartMismatch(f"point must be in the {kind.value} chart")
    _, y, z = p.coords
    if kind is AxisKind.A1:
        return RegionLabel.EXTERIOR if y * y + z * z > tau else RegionLabel.AXIS
    if kind is AxisKind.A3:
        if abs(y) <= tau:
            return RegionLabel.AXIS if abs(z) <= tau else RegionLabel.T_PLANE
        return RegionLabel.S_PLUS if y > 0 else RegionLabel.S_MINUS
    if abs(y) <= tau and abs(z) <= tau:
        return RegionLabel.AXIS
    q = z * z - y * y
    if abs(q) <= tau:
        return RegionLabel.DEGENERATE_PLANE
    if q > 0:
        return RegionLabel.R_PLUS if z > 0 else RegionLabel.R_MINUS
    return RegionLabel.Q_PLUS if y > 0 else RegionLabel.Q_MINUS


class OrbitKind(enum.Enum):
    POINT = "Point"
    CIRCLE = "Circle"
    HYPERBOLA_BRANCH = "HyperbolaBranch"
    HALF_LINE = "HalfLine"
    PARABOLA = "Parabola"
    LINE = "Line"


@dataclass(frozen=True)
class OrbitDescriptor:
    """Orbit of a point under a rotation group.

    ``center`` is the point of the axis in the orbit's plane. ``invariant``
    holds the conserved quadratic (y^2+z^2 for circles, z^2-y^2 for
    hyperbolas). ``branch`` gives the sign of the coordinate selecting a
    hyperbola branch, ``direction`` the half-line or line direction, and
    ``plane_y`` the fixed y-value of a parabola.
    """

    kind: OrbitKind
    center: tuple = (0.0, 0.0, 0.0)
    radius: float = 0.0
    invariant: float = 0.0
    branch: str = ""
    direction: tuple = (0.0, 0.0, 0.0)
    plane_y: float = 0.0

    def contains(self, q, tol: float = 1e-9) -> bool:
        x, y, z = (float(v) for v in q)
        cx, cy, cz = self.center
        k = self.kind
        if k is OrbitKind.POINT:
            return max(abs(x - cx), abs(y - cy), abs(z - cz)) <= tol
        if k is OrbitKind.CIRCLE:
            return abs(x - cx) <= tol and abs(y * y + z * z - self.radius ** 2) <= tol
        if k is OrbitKind.HALF_LINE:
            d = np.array(self.direction)
            v = np.array([x, y, z]) - np.array(self.center)
            lam = float(v @ d) / float(d @ d)
            return lam > 0 and np.linalg.norm(v - lam * d) <= tol
        if k is OrbitKind.HYPERBOLA_BRANCH:
            if abs(x - cx) > tol or abs(z * z - y * y - self.invariant) > tol:
                return False
            coord = z if self.branch.startswith("z") else y
            return (coord > 0) == self.branch.endswith(">0")
        if k is OrbitKind.LINE:
            return abs(y) <= tol and abs(z - cz) <= tol
        a1, a2, a3 = self.center[0], self.plane_y, self.center[2]
        if abs(y - a2) > tol:
            return False
        xz = (z - a3) ** 2 / (2 * a2) + (a3 / a2) * (z - a3) + a1
        return abs(x - xz) <= tol


def orbit_descriptor(p: MVec3, kind: AxisKind, tau: float = TAU_REGION) -> OrbitDescriptor:
    kind = AxisKind(kind)
    if p.chart != chart_for(kind):
        raise ChartMismatch(f"point must be in the {kind.value} chart")
    a1, a2, a3 = p.coords
    if kind is AxisKind.A1:
        r2 = a2 * a2 + a3 * a3
        if r2 <= tau:
            return OrbitDescriptor(OrbitKind.POINT, center=(a1, a2, a3))
        return OrbitDescriptor(OrbitKind.CIRCLE, center=(a1, 0.0, 0.0),
                               radius=float(np.sqrt(r2)), invariant=r2)
    if kind is AxisKind.A2:
        if abs(a2) <= tau and abs(a3) <= tau:
            return OrbitDescriptor(OrbitKind.POINT, center=(a1, a2, a3))
        q = a3 * a3 - a2 * a2
        if abs(q) <= tau:
            return OrbitDescriptor(OrbitKind.HALF_LINE, center=(a1, 0.0, 0.0),
                                   direction=(0.0, a2, a3))
        branch = ("z>0" if a3 > 0 else "z<0") if q > 0 else ("y>0" if a2 > 0 else "y<0")
        return OrbitDescriptor(OrbitKind.HYPERBOLA_BRANCH, center=(a1, 0.0, 0.0),
                               invariant=q, branch=branch)
    if abs(a2) <= tau:
        if abs(a3) <= tau:
            return OrbitDescriptor(OrbitKind.POINT, center=(a1, a2, a3))
        return OrbitDescriptor(OrbitKind.LINE, center=(a1, 0.0, a3), direction=(1.0, 0.0, 0.0))
    return OrbitDescriptor(OrbitKind.PARABOLA, center=(a1, 0.0, a3), plane_y=a2)
