"""A2-invariant Lorentzian surfaces that cross the light cone of an axis point.

A seed ``phi`` on ``(-delta^2, delta^2)`` gives the meridians
``alpha(s) = (phi(s^2), 0, s)`` in the plane y = 0 and
``beta(s) = (phi(-s^2), s, 0)`` in the plane z = 0. Sweeping both by the
boosts about the x-axis produces the graph ``x = phi(z^2 - y^2)``, which
is smooth across the light-like orbital of ``p = (phi(0), 0, 0)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.interpolate import CubicSpline

from . import expr as _expr
from .minkowski import CHART_A2, AxisKind, dot
from .patches import Meridian
from .surface import RotationalSurface, generate_surface, residual_max

CHEB_DEGREE = 16
CHEB_SPAN = 0.3
EXACT_TOL = 1e-12


class GluingError(ValueError):
    pass


@dataclass(frozen=True)
class GluingSeed:
    """Seed ``phi`` with its first two derivatives, defined for ``|u| < delta**2``."""

    phi: Callable
    delta: float
    dphi: Callable
    d2phi: Callable
    label: str = "phi"

    def f_alpha(self, s):
        s = np.asarray(s, dtype=float)
        return self.phi(s * s)

    def f_beta(self, s):
        s = np.asarray(s, dtype=float)
        return self.phi(-s * s)

    def timelike_margin(self, samples: int = 401) -> float:
        """``max (f_alpha')^2`` over the open interval; must stay below 1."""
        s = np.linspace(-self.delta, self.delta, samples)[1:-1]
        return float(np.max((2.0 * s * self.dphi(s * s)) ** 2))


def admissible_delta(seed: GluingSeed, start: float = 0.9, shrink: float = 0.9) -> float:
    """Largest ``start * shrink**k`` on which the alpha profile stays time-like."""
    delta = start
    for _ in range(200):
        trial = GluingSeed(seed.phi, delta, seed.dphi, seed.d2phi, seed.label)
        with np.errstate(invalid="ignore"):
            margin = trial.timelike_margin()
        if margin < 1.0:
            return delta
        delta *= shrink
    raise GluingError("profile not time-like on any neighbourhood of the axis")


def seed_from_expression(text: str, delta: float | None = None) -> GluingSeed:
    """Closed-form seed; ``delta=None`` picks an admissible half-width automatically."""
    node = _expr.parse(text)
    d1 = node.diff()
    d2 = d1.diff()

    def wrap(n):
        def f(u):
            out = n(np.asarray(u, dtype=float))
            return np.broadcast_to(out, np.shape(u)).astype(float) if np.ndim(u) else float(out)
        return f

    seed = GluingSeed(wrap(node), 0.9 if delta is None else float(delta), wrap(d1), wrap(d2), text)
    if delta is None:
        seed = GluingSeed(seed.phi, admissible_delta(seed), seed.dphi, seed.d2phi, text)
    return seed


def seed_from_samples(u, values, delta: float | None = None, label: str = "sampled") -> GluingSeed:
    """C^2 cubic-spline seed through samples of phi."""
    u = np.asarray(u, dtype=float)
    sp = CubicSpline(u, np.asarray(values, dtype=float))
    if delta is None:
        delta = math.sqrt(min(-u[0], u[-1]))
    return GluingSeed(sp, float(delta), sp.derivative(), sp.derivative(2), label)


def gluing_function(seed: GluingSeed) -> Callable:
    """``F(y, z) = phi(z^2 - y^2)`` on the band ``|z^2 - y^2| < delta^2``."""

    def F(y, z):
        u = np.asarray(z, dtype=float) ** 2 - np.asarray(y, dtype=float) ** 2
        if np.any(np.abs(u) >= seed.delta ** 2):
            raise GluingError("point outside the band |z^2 - y^2| < delta^2")
        return seed.phi(u)

    return F


def alpha_meridian(seed: GluingSeed, s_range) -> Meridian:
    def func(s):
        s = np.asarray(s, dtype=float)
        u = s * s
        z = np.zeros(s.shape)
        d1, d2 = seed.dphi(u), seed.d2phi(u)
        return (np.stack([seed.phi(u), z, s], -1), np.stack([2 * s * d1, z, z + 1.0], -1),
                np.stack([2 * d1 + 4 * u * d2, z, z], -1))

    return Meridian(AxisKind.A2, func, tuple(s_range))


def beta_meridian(seed: GluingSeed, s_range) -> Meridian:
    def func(s):
        s = np.asarray(s, dtype=float)
        u = -s * s
        z = np.zeros(s.shape)
        d1, d2 = seed.dphi(u), seed.d2phi(u)
        return (np.stack([seed.phi(u), s, z], -1), np.stack([-2 * s * d1, z + 1.0, z], -1),
                np.stack([-2 * d1 + 4 * s * s * d2, z, z], -1))

    return Meridian(AxisKind.A2, func, tuple(s_range))


@dataclass(frozen=True)
class LightLikePatch:
    """Axis point ``p`` and the open light-like rays of its orbital that are included."""

    point: tuple
    included_pieces: tuple = ("point", "y=z,y>0", "y=z,y<0", "y=-z,y>0", "y=-z,y<0")

    def ray_points(self, radii):
        x0 = self.point[0]
        pts = []
        for a in np.atleast_1d(radii):
            for sy, sz in ((1, 1), (-1, -1), (1, -1), (-1, 1)):
                pts.append((x0, sy * a, sz * a))
        return np.array(pts)


@dataclass
class GluedSurface:
    seed: GluingSeed
    alpha_piece: Meridian = field(repr=False)
    beta_piece: Meridian = field(repr=False)
    patch: LightLikePatch
    surfaces: dict = field(repr=False)

    def vertices(self) -> np.ndarray:
        return np.concatenate([s.X.reshape(-1, 3) for s in self.surfaces.values()])

    def residual_max(self) -> float:
        return max(residual_max(s) for s in self.surfaces.values())


def build_glued_surface(seed: GluingSeed, s_range=None, t_grid=None, ns: int = 201) -> GluedSurface:
    """Sweep the alpha and beta meridians on both sides of the axis.

    ``s_range = (s_min, s_max)`` with ``0 < s_min < s_max < delta``; the pieces
    are tagged R+, R- (alpha, z of either sign) and Q+, Q- (beta).
    """
    if seed.timelike_margin() >= 1.0:
        raise GluingError("profile not time-like: (f_alpha')^2 >= 1")
    if s_range is None:
        s_range = (0.1 * seed.delta, 0.9 * seed.delta)
    s0, s1 = map(float, s_range)
    if not 0.0 < s0 < s1 < seed.delta:
        raise GluingError("s_range must satisfy 0 < s_min < s_max < delta")
    t = np.linspace(-0.5, 0.5, 17) if t_grid is None else np.asarray(t_grid, dtype=float)
    plus = np.linspace(s0, s1, ns)
    minus = -plus[::-1]
    A = alpha_meridian(seed, (-s1, s1))
    B = beta_meridian(seed, (-s1, s1))
    surfaces = {
        "R+": generate_surface(AxisKind.A2, A, t, plus),
        "R-": generate_surface(AxisKind.A2, A, t, minus),
        "Q+": generate_surface(AxisKind.A2, B, t, plus),
        "Q-": generate_surface(AxisKind.A2, B, t, minus),
    }
    patch = LightLikePatch((float(seed.phi(0.0)), 0.0, 0.0))
    return GluedSurface(seed, A, B, patch, surfaces)


# ----- local gluing check --------------------------------------------------------

@dataclass(frozen=True)
class GluingReport:
    lg1: bool
    lg2: bool
    lg3_max_jump: float
    lorentzian_along_patch: bool
    passed: bool
    diagnostics: tuple = ()
    consistency: float = 0.0

    def as_dict(self):
        return {"lg1": self.lg1, "lg2": self.lg2, "lg3_max_jump": self.lg3_max_jump,
                "lorentzian_along_patch": self.lorentzian_along_patch, "passed": self.passed,
                "diagnostics": list(self.diagnostics), "consistency": self.consistency}


def _one_sided_derivatives(g: Callable, side: int, order: int, span: float, degree: int):
    """Derivatives at 0 of ``g`` on ``[0, span]`` (side=+1) or ``[-span, 0]`` from a Chebyshev fit."""
    x = np.cos(np.pi * (np.arange(4 * degree) + 0.5) / (4 * degree))
    u = side * 0.5 * span * (x + 1.0)
    with np.errstate(invalid="ignore"):
        vals = np.asarray(g(u), dtype=float)
    if not np.all(np.isfinite(vals)):
        return np.full(order + 1, np.nan)
    c = cheb.chebfit(x, vals, degree)
    out = []
    for k in range(order + 1):
        dk = cheb.chebder(c, k) if k else c
        out.append(cheb.chebval(-1.0, dk) * (2.0 / (side * span)) ** k)
    return np.array(out)


def _derivative_at_zero(f: Callable, h: float = 1e-4) -> float:
    return float((-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h))


def _lg3_jumps(f_alpha, f_beta, order, span, degree):
    """Max scaled jump of the one-sided u-derivatives across each of the four rays."""
    worst = 0.0
    for sa in (1.0, -1.0):
        for sb in (1.0, -1.0):
            gr = _one_sided_derivatives(lambda u: f_alpha(sa * np.sqrt(u)), 1, order, span, degree)
            gq = _one_sided_derivatives(lambda u: f_beta(sb * np.sqrt(-u)), -1, order, span, degree)
            jumps = [abs(gr[k] - gq[k]) * span ** k / math.factorial(k) for k in range(order + 1)]
            worst = max(worst, float(np.max(jumps)) if np.all(np.isfinite(jumps)) else math.inf)
    return worst


def _lorentzian_rays(f_alpha, radii=(0.1, 0.3, 0.5)) -> bool:
    """Light-like tangent construction along the rays of the orbital."""
    f2 = float((f_alpha(1e-3) - 2 * f_alpha(0.0) + f_alpha(-1e-3)) / 1e-6)
    G = CHART_A2.metric
    for a in radii:
        for y0, z0 in ((a, a), (-a, -a), (a, -a), (-a, a)):
            w = np.array([-a * a * f2, y0, 0.0])
            ell = np.array([0.0, np.sign(y0), np.sign(z0)])
            ww, wl = float(dot(G, w, w)), float(dot(G, w, ell))
            if abs(ww) < 1e-14 or abs(float(dot(G, ell, ell))) > 1e-14:
                return False
            c = -2.0 * wl / ww
            v = c * w + ell
            if abs(float(dot(G, v, v))) > 1e-10 * max(1.0, float(v @ v)):
                return False
            if np.linalg.norm(np.cross(v, ell)) < 1e-10:
                return False
            gram = ww * float(dot(G, ell, ell)) - wl * wl
            if gram >= 0.0:
                return False
    return True


def check_local_gluing(f_alpha: Callable, f_beta: Callable, order: int = 3, tol: float = 1e-8,
                       span: float = CHEB_SPAN, degree: int = CHEB_DEGREE) -> GluingReport:
    """Check the local gluing conditions for a pair of profile functions.

    lg1: both profiles meet the axis perpendicularly (zero slope at 0).
    lg2: the two profiles meet the axis at the same point.
    lg3: ``F`` is smooth across the light-like rays up to ``order``,
    measured as the largest scaled jump of one-sided u-derivatives.
    """
    diag = []
    va, vb = float(f_alpha(0.0)), float(f_beta(0.0))
    if abs(va - vb) > tol * max(1.0, abs(va)):
        return GluingReport(False, False, math.inf, False, False,
                            (f"f_alpha(0)={va!r} differs from f_beta(0)={vb!r}",))
    lg2 = True
    da, db = _derivative_at_zero(f_alpha), _derivative_at_zero(f_beta)
    lg1 = abs(da) <= max(tol, 1e-7) and abs(db) <= max(tol, 1e-7)
    if not lg1:
        diag.append(f"perpendicularity fails: f_alpha'(0)={da:.6g}, f_beta'(0)={db:.6g}")
    jump = _lg3_jumps(f_alpha, f_beta, order, span, degree)
    coarse = _lg3_jumps(f_alpha, f_beta, order, span, degree - 4)
    consistency = abs(jump - coarse)
    if not jump <= tol:
        diag.append(f"derivative jump across the light cone: {jump:.3g}")
    lor = lg1 and _lorentzian_rays(f_alpha)
    if lg1 and not lor:
        diag.append("tangent plane along the light-like rays is not Lorentzian")
    passed = lg1 and lg2 and jump <= tol and lor
    return GluingReport(lg1, lg2, jump, lor, passed, tuple(diag), consistency)


def check_glued_surface(glued: GluedSurface, order: int = 3, tol: float = 1e-8) -> GluingReport:
    return check_local_gluing(glued.seed.f_alpha, glued.seed.f_beta, order, tol)


# ----- classification -------------------------------------------------------------

class SolutionKind(enum.Enum):
    PLANE = "PlanePerpToAxis"
    HYPERBOLOID = "OneSheetHyperboloid"
    NONE = "NotASolution"


@dataclass(frozen=True)
class Classification:
    kind: SolutionKind
    center: tuple | None
    radius: float | None
    plane_fit: float
    hyperboloid_fit: float
    residual_max: float

    def as_dict(self):
        return {"kind": self.kind.value, "center": list(self.center) if self.center else None,
                "radius": self.radius, "plane_fit": self.plane_fit,
                "hyperboloid_fit": self.hyperboloid_fit, "residual_max": self.residual_max}


def classify_glued_solution(glued: GluedSurface, tol: float = 1e-6) -> Classification:
    """Least-squares fits of ``x = A`` and ``(x - A)^2 + y^2 - z^2 = rho^2``."""
    P = glued.vertices()
    x, y, z = P[:, 0], P[:, 1], P[:, 2]
    scale = max(1.0, float(np.sqrt(np.mean(P * P))))
    A = float(np.mean(x))
    plane_fit = float(np.sqrt(np.mean((x - A) ** 2))) / scale
    q = x * x + y * y - z * z
    M = np.stack([2 * x, np.ones_like(x)], -1)
    coef, *_ = np.linalg.lstsq(M, q, rcond=None)
    hyp_fit = float(np.sqrt(np.mean((M @ coef - q) ** 2))) / max(1.0, float(np.sqrt(np.mean(q * q))))
    rho2 = float(coef[1] + coef[0] ** 2)
    rmax = glued.residual_max()
    if plane_fit < tol:
        return Classification(SolutionKind.PLANE, (A, 0.0, 0.0), None, plane_fit, hyp_fit, rmax)
    if hyp_fit < tol and rho2 > 0:
        return Classification(SolutionKind.HYPERBOLOID, (float(coef[0]), 0.0, 0.0), math.sqrt(rho2),
                              plane_fit, hyp_fit, rmax)
    return Classification(SolutionKind.NONE, None, None, plane_fit, hyp_fit, rmax)
