"""Parametrized surface patches in L^3 with analytic first and second derivatives.

A patch supplies, at parameter points ``p = (u, v)``, the position and its
partial derivatives up to order two. Everything intrinsic (metric,
Christoffel symbols) and extrinsic (normal, second form, Gaussian curvature)
is computed from those, so intrinsic and extrinsic quantities come from
independent formulas.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import BPoly

from .minkowski import CHART_A1, CHART_A2, CHART_A3, AxisKind, Chart, chart_for, cross_array, dot, generator, rotation_matrix

# Future-pointing ambient time-like vector per chart.
FUTURE = {
    "A1": np.array([1.0, 0.0, 0.0]),
    "A2": np.array([0.0, 0.0, 1.0]),
    "A3": np.array([1.0, 1.0, 0.0]),
}


class DegenerateMetric(ValueError):
    pass


@dataclass(frozen=True)
class Meridian:
    """Curve ``s -> alpha(s)`` returning (alpha, alpha', alpha'') with shape (..., 3)."""

    kind: AxisKind
    func: Callable
    s_range: tuple

    def __call__(self, s):
        return self.func(np.asarray(s, dtype=float))

    @property
    def chart(self) -> Chart:
        return chart_for(self.kind)


def sampled_meridian(kind: AxisKind, s, alpha, d1, d2) -> Meridian:
    """Quintic Hermite interpolant through sampled position, velocity, acceleration."""
    s = np.asarray(s, dtype=float)
    y = np.stack([alpha, d1, d2], axis=1)
    poly = BPoly.from_derivatives(s, y)
    dpoly, ddpoly = poly.derivative(), poly.derivative(2)

    def func(x):
        return poly(x), dpoly(x), ddpoly(x)

    return Meridian(kind, func, (float(s[0]), float(s[-1])))


class Patch:
    """Base class: subclasses implement ``frame(u, v)``."""

    chart: Chart

    def frame(self, u, v):
        raise NotImplementedError

    def _frame(self, p):
        p = np.asarray(p, dtype=float)
        return self.frame(p[..., 0], p[..., 1])

    @property
    def future_vector(self) -> np.ndarray:
        return FUTURE[self.chart.name]

    def ip(self, a, b):
        return dot(self.chart.metric, a, b)

    def metric(self, p):
        _, Xu, Xv, *_ = self._frame(p)
        guu, guv, gvv = self.ip(Xu, Xu), self.ip(Xu, Xv), self.ip(Xv, Xv)
        return np.stack([np.stack([guu, guv], -1), np.stack([guv, gvv], -1)], -2)

    def metric_derivatives(self, p):
        """``dg[..., k, i, j] = d_k g_ij``."""
        _, Xu, Xv, Xuu, Xuv, Xvv = self._frame(p)
        D = [Xu, Xv]
        DD = [[Xuu, Xuv], [Xuv, Xvv]]
        dg = np.empty(np.shape(Xu)[:-1] + (2, 2, 2))
        for k in range(2):
            for i in range(2):
                for j in range(2):
                    dg[..., k, i, j] = self.ip(DD[i][k], D[j]) + self.ip(D[i], DD[j][k])
        return dg

    def christoffel(self, p):
        """``Gamma[..., k, i, j]`` of the induced Levi-Civita connection."""
        g = self.metric(p)
        dg = self.metric_derivatives(p)
        gi = np.linalg.inv(g)
        # first kind: [ij, l] = (d_i g_lj + d_j g_li - d_l g_ij) / 2
        first = 0.5 * (np.einsum("...ilj->...lij", dg) + np.einsum("...jli->...lij", dg) - dg)
        return np.einsum("...kl,...lij->...kij", gi, first)

    def connection(self, p, a, b):
        """``Gamma(a, b)`` as a coordinate vector."""
        return np.einsum("...kij,...i,...j->...k", self.christoffel(p), a, b)

    def normal(self, p):
        _, Xu, Xv, *_ = self._frame(p)
        n = cross_array(self.chart.metric, Xu, Xv)
        q = self.ip(n, n)
        if np.any(np.abs(q) < 1e-300):
            raise DegenerateMetric("degenerate tangent plane")
        return n / np.sqrt(np.abs(q))[..., None], np.sign(q)

    def second_form(self, p):
        _, _, _, Xuu, Xuv, Xvv = self._frame(p)
        N, _ = self.normal(p)
        buu, buv, bvv = self.ip(Xuu, N), self.ip(Xuv, N), self.ip(Xvv, N)
        return np.stack([np.stack([buu, buv], -1), np.stack([buv, bvv], -1)], -2)

    def gauss_curvature(self, p):
        """Extrinsic Gaussian curvature ``eps det b / det g``."""
        _, eps = self.normal(p)
        return eps * np.linalg.det(self.second_form(p)) / np.linalg.det(self.metric(p))

    def mean_curvature(self, p):
        S = np.linalg.solve(self.metric(p), self.second_form(p))
        return 0.5 * np.trace(S, axis1=-2, axis2=-1)

    def area_element(self, p):
        return np.sqrt(np.abs(np.linalg.det(self.metric(p))))

    def push(self, p, a):
        """Ambient image ``dX(a)`` of a coordinate tangent vector."""
        _, Xu, Xv, *_ = self._frame(p)
        a = np.asarray(a, dtype=float)
        return a[..., 0:1] * Xu + a[..., 1:2] * Xv

    def future_sign(self, p, a):
        """+1 for future-pointing, -1 for past-pointing time-like ``a``."""
        return -np.sign(self.ip(self.push(p, a), self.future_vector))


class EmbeddedPatch(Patch):
    """Patch given by a function returning (X, Xu, Xv, Xuu, Xuv, Xvv)."""

    def __init__(self, chart: Chart, frame: Callable, name: str = "patch"):
        self.chart = chart
        self._frame_fn = frame
        self.name = name

    def frame(self, u, v):
        return self._frame_fn(np.asarray(u, dtype=float), np.asarray(v, dtype=float))


class RotationalPatch(Patch):
    """``X(s, t) = R(t) alpha(s)`` for a meridian and an axis kind."""

    def __init__(self, meridian: Meridian, name: str = "rotational"):
        self.meridian = meridian
        self.kind = meridian.kind
        self.chart = chart_for(meridian.kind)
        self.L = generator(meridian.kind)
        self.name = name

    def frame(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        a, a1, a2 = self.meridian(s.ravel())
        R = rotation_matrix(self.kind, t.ravel())
        RL = R @ self.L
        RLL = RL @ self.L
        shape = s.shape + (3,)

        def ap(M, x):
            return np.einsum("nij,nj->ni", M, x).reshape(shape)

        return ap(R, a), ap(R, a1), ap(RL, a), ap(R, a2), ap(RL, a1), ap(RLL, a)


def _plane_frame(u, v):
    u, v = np.broadcast_arrays(u, v)
    z = np.zeros(u.shape)
    X = np.stack([z, u, v], -1)
    e1 = np.stack([z, z + 1.0, z], -1)
    e2 = np.stack([z, z, z + 1.0], -1)
    zero = np.zeros(u.shape + (3,))
    return X, e1, e2, zero, zero.copy(), zero.copy()


def flat_plane() -> EmbeddedPatch:
    """The plane x = 0 of the A2 chart; coordinates (y, z), metric dy^2 - dz^2."""
    return EmbeddedPatch(CHART_A2, _plane_frame, "flat-plane")


def _saddle_frame(y, z):
    y, z = np.broadcast_arrays(y, z)
    o, n = np.ones(y.shape), np.zeros(y.shape)
    X = np.stack([y * y - z * z, y, z], -1)
    Xy = np.stack([2 * y, o, n], -1)
    Xz = np.stack([-2 * z, n, o], -1)
    Xyy = np.stack([2 * o, n, n], -1)
    Xzz = np.stack([-2 * o, n, n], -1)
    Xyz = np.zeros(y.shape + (3,))
    return X, Xy, Xz, Xyy, Xyz, Xzz


def saddle() -> EmbeddedPatch:
    """Graph x = y^2 - z^2 in the A2 chart; Lorentzian where 4(z^2 - y^2) < 1."""
    return EmbeddedPatch(CHART_A2, _saddle_frame, "saddle")


def line_meridian(kind: AxisKind, point, direction, s_range=(-1.0, 1.0)) -> Meridian:
    p = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)

    def func(s):
        s = np.asarray(s, dtype=float)[..., None]
        return p + s * d, np.broadcast_to(d, s.shape[:-1] + (3,)).copy(), np.zeros(s.shape[:-1] + (3,))

    return Meridian(kind, func, s_range)


def hyperboloid_meridian(radius: float = 1.0, s_range=(0.2, 2.0)) -> Meridian:
    """(sqrt(r^2 + s^2), 0, s): meridian of x^2 + y^2 - z^2 = r^2 about the x-axis."""
    r2 = radius * radius

    def func(s):
        s = np.asarray(s, dtype=float)
        q = np.sqrt(r2 + s * s)
        z = np.zeros(s.shape)
        a = np.stack([q, z, s], -1)
        a1 = np.stack([s / q, z, z + 1.0], -1)
        a2 = np.stack([r2 / q ** 3, z, z], -1)
        return a, a1, a2

    return Meridian(AxisKind.A2, func, s_range)


def two_sheet_meridian(s_range=(0.2, 1.5)) -> Meridian:
    """(sinh s, 0, cosh s): meridian of the two-sheet hyperboloid x^2 + y^2 - z^2 = -1."""

    def func(s):
        s = np.asarray(s, dtype=float)
        z = np.zeros(s.shape)
        sh, ch = np.sinh(s), np.cosh(s)
        return (np.stack([sh, z, ch], -1), np.stack([ch, z, sh], -1), np.stack([sh, z, ch], -1))

    return Meridian(AxisKind.A2, func, s_range)


def hyperboloid() -> RotationalPatch:
    """One-sheet hyperboloid in coordinates (z, t); K = 1 and metric -dz^2/(1+z^2) + ... ."""
    return RotationalPatch(hyperboloid_meridian(), "hyperboloid")


def rindler_plane(A: float = 1.0) -> RotationalPatch:
    """Plane x = A swept by the meridian (A, 0, s); metric -ds^2 + s^2 dt^2."""
    return RotationalPatch(line_meridian(AxisKind.A2, (A, 0.0, 0.0), (0.0, 0.0, 1.0), (0.1, 2.0)), "rindler-plane")


def cylinder(r: float = 1.0) -> RotationalPatch:
    """Lorentzian cylinder y^2 + z^2 = r^2 about the time-like x-axis (A1 chart)."""
    return RotationalPatch(line_meridian(AxisKind.A1, (0.0, r, 0.0), (1.0, 0.0, 0.0)), "cylinder")


def two_sheet_hyperboloid() -> RotationalPatch:
    """Riemannian upper sheet of x^2 + y^2 - z^2 = -1, coordinates (s, t)."""
    return RotationalPatch(two_sheet_meridian(), "two-sheet")


__all__ = [
    "CHART_A1", "CHART_A3", "DegenerateMetric", "EmbeddedPatch", "Meridian", "Patch",
    "RotationalPatch", "cylinder", "flat_plane", "hyperboloid", "hyperboloid_meridian",
    "line_meridian", "rindler_plane", "saddle", "sampled_meridian", "two_sheet_hyperboloid",
    "two_sheet_meridian",
]
