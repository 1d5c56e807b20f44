"""Rotational surfaces in L^3: grids, fundamental forms, energies, Willmore residual."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gaussbonnet as gb
from ._numerics import derivative5
from .elastica import ModelKind, ProfileCurve
from .minkowski import AxisKind, chart_for, cross_array, dot, generator, rotation_matrix
from .patches import (Meridian, RotationalPatch, hyperboloid_meridian, line_meridian,
                      sampled_meridian, two_sheet_meridian)

TAU_AXIS = 1e-9
TAU_DEGEN = 1e-10

# (axis kind, ambient slot of the half-plane x coordinate, slot of w)
_EMBEDDING = {
    ModelKind.ADS_A1: (AxisKind.A1, 0, 1),
    ModelKind.DESITTER_R: (AxisKind.A2, 0, 2),
    ModelKind.HYPERBOLIC_Q: (AxisKind.A2, 0, 1),
    ModelKind.ADS_A3: (AxisKind.A3, 0, 1),
}


class DegenerateSurface(ValueError):
    pass


def axis_kind_for(model_kind: ModelKind) -> AxisKind:
    return _EMBEDDING[ModelKind(model_kind)][0]


def meridian_from_profile(curve: ProfileCurve) -> Meridian:
    """Embed a half-plane curve into its plane of L^3 as a sampled meridian."""
    kind, ix, iw = _EMBEDDING[curve.model.kind]
    n = len(curve.s)

    def lift(v):
        out = np.zeros((n, 3))
        out[:, ix] = v[:, 0]
        out[:, iw] = v[:, 1]
        return out

    return sampled_meridian(kind, curve.s, lift(curve.pos), lift(curve.tan), lift(curve.acceleration()))


@dataclass
class RotationalSurface:
    """Vertex grid ``X[i, j] = R(t_j) alpha(s_i)`` with per-vertex shape data."""

    kind: AxisKind
    meridian: Meridian = field(repr=False)
    s: np.ndarray
    t: np.ndarray
    X: np.ndarray = field(repr=False)
    N: np.ndarray = field(repr=False)
    eps: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    H: np.ndarray = field(repr=False)
    K: np.ndarray = field(repr=False)
    dN2: np.ndarray = field(repr=False)
    degenerate: np.ndarray = field(repr=False)
    profile: ProfileCurve | None = field(default=None, repr=False)

    @property
    def H2(self) -> np.ndarray:
        return self.H * self.H

    @property
    def chart(self):
        return chart_for(self.kind)

    @property
    def shape(self):
        return self.X.shape[:2]

    @property
    def area_element(self) -> np.ndarray:
        return np.sqrt(np.abs(np.linalg.det(self.g)))

    @property
    def causal_sign(self) -> int:
        """+1 for Lorentzian surfaces (space-like normal), -1 for Riemannian ones."""
        e = self.eps[~self.degenerate]
        return int(np.sign(np.median(e))) if e.size else 0

    def patch(self) -> RotationalPatch:
        return RotationalPatch(self.meridian, "surface")

    def gauss_identity_defect(self) -> np.ndarray:
        return np.abs(self.dN2 - (4.0 * self.H2 - 2.0 * self.eps * self.K))


def generate_surface(kind: AxisKind, profile, t_grid, s_grid=None) -> RotationalSurface:
    """Sweep a meridian by the rotation group of ``kind``.

    ``profile`` is a ProfileCurve (embedded into its plane) or a Meridian
    sampled at ``s_grid``.
    """
    kind = AxisKind(kind)
    curve = None
    if isinstance(profile, ProfileCurve):
        curve = profile
        if axis_kind_for(curve.model.kind) is not kind:
            raise ValueError(f"{curve.model.kind.value} profiles generate {axis_kind_for(curve.model.kind).value} surfaces")
        meridian = meridian_from_profile(curve)
        s = curve.s
    else:
        meridian = profile
        if meridian.kind is not kind:
            raise ValueError("meridian belongs to another axis kind")
        s = np.asarray(s_grid if s_grid is not None else np.linspace(*meridian.s_range, 201), dtype=float)
    t = np.asarray(t_grid, dtype=float)
    G = chart_for(kind).metric
    L = generator(kind)
    if curve is not None:
        _, ix, iw = _EMBEDDING[curve.model.kind]
        a = np.zeros((len(s), 3))
        a[:, ix], a[:, iw] = curve.pos[:, 0], curve.pos[:, 1]
        a1 = np.zeros_like(a)
        a1[:, ix], a1[:, iw] = curve.tan[:, 0], curve.tan[:, 1]
        acc = curve.acceleration()
        a2 = np.zeros_like(a)
        a2[:, ix], a2[:, iw] = acc[:, 0], acc[:, 1]
    else:
        a, a1, a2 = meridian(s)
    La = a @ L.T
    if np.any(np.linalg.norm(La, axis=-1) <= TAU_AXIS):
        raise DegenerateSurface("degenerate surface of revolution: profile touches the axis")
    R = rotation_matrix(kind, t)

    def sweep(v):
        return np.einsum("tij,sj->sti", R, v)

    X = sweep(a)
    Xs, Xt = sweep(a1), sweep(La)
    Xss, Xst, Xtt = sweep(a2), sweep(a1 @ L.T), sweep(La @ L.T)

    gss, gst, gtt = dot(G, Xs, Xs), dot(G, Xs, Xt), dot(G, Xt, Xt)
    g = np.stack([np.stack([gss, gst], -1), np.stack([gst, gtt], -1)], -2)
    detg = np.linalg.det(g)
    degenerate = np.abs(detg) <= TAU_DEGEN * (gss ** 2 + gtt ** 2 + 2 * gst ** 2)
    n = cross_array(G, Xs, Xt)
    q = dot(G, n, n)
    with np.errstate(invalid="ignore", divide="ignore"):
        N = n / np.sqrt(np.abs(q))[..., None]
        eps = np.sign(q)
        b = np.stack([np.stack([dot(G, Xss, N), dot(G, Xst, N)], -1),
                      np.stack([dot(G, Xst, N), dot(G, Xtt, N)], -1)], -2)
        gsafe = np.where(degenerate[..., None, None], np.eye(2), g)
        gi = np.linalg.inv(gsafe)
        S = gi @ b
        H = 0.5 * np.trace(S, axis1=-2, axis2=-1)
        K = eps * np.linalg.det(b) / detg
        Ns = derivative5(s, N, axis=0)
        Nt = N @ L.T
        dN = [Ns, Nt]
        dN2 = sum(gi[..., i, j] * dot(G, dN[i], dN[j]) for i in range(2) for j in range(2))
    for arr in (H, K, dN2):
        arr[degenerate] = np.nan
    return RotationalSurface(kind, meridian, s, t, X, N, eps, g, b, H, K, dN2, degenerate, curve)


def shape_data_at(surface: RotationalSurface, i: int, j: int):
    """(N, eps, H2, K, dN2) at grid vertex (i, j)."""
    ns, nt = surface.shape
    if not (0 <= i < ns and 0 <= j < nt):
        raise IndexError("vertex outside the grid")
    if surface.degenerate[i, j]:
        raise DegenerateSurface("degenerate tangent plane")
    return (surface.N[i, j].copy(), int(surface.eps[i, j]), float(surface.H2[i, j]),
            float(surface.K[i, j]), float(surface.dN2[i, j]))


def _window_index(grid, window):
    if window is None:
        return np.arange(len(grid))
    lo, hi = window
    idx = np.nonzero((grid >= lo - 1e-12) & (grid <= hi + 1e-12))[0]
    if len(idx) < 2:
        raise ValueError("window must contain at least two grid lines")
    return idx


def _grid_integral(surface, field_, s_window, t_window):
    i = _window_index(surface.s, s_window)
    j = _window_index(surface.t, t_window)
    sub = np.ix_(i, j)
    if np.any(surface.degenerate[sub]):
        raise DegenerateSurface("degenerate cell inside the window")
    f = field_[sub] * surface.area_element[sub]
    return float(np.trapezoid(np.trapezoid(f, surface.t[j], axis=1), surface.s[i]))


def sigma_energy(surface: RotationalSurface, s_window=None, t_window=None) -> float:
    """``int |dN|^2 dA`` over a rectangular parameter window (trapezoidal)."""
    return _grid_integral(surface, surface.dN2, s_window, t_window)


def area(surface: RotationalSurface, s_window=None, t_window=None) -> float:
    return _grid_integral(surface, np.ones(surface.shape), s_window, t_window)


def willmore_residual(surface: RotationalSurface) -> np.ndarray:
    """``eps * Lap H + H (|dN|^2 - 2 H^2)`` with a two-vertex margin set to NaN.

    The Laplacian is in divergence form with ``sqrt|det g|`` (a d'Alembertian
    on Lorentzian surfaces).
    """
    s, t = surface.s, surface.t
    if len(s) < 9 or len(t) < 9:
        raise ValueError("need at least 9 grid lines in each direction")
    gi = np.linalg.inv(np.where(surface.degenerate[..., None, None], np.eye(2), surface.g))
    gi[surface.degenerate] = np.nan
    sq = surface.area_element
    H = surface.H
    Hs = derivative5(s, H, axis=0)
    Ht = derivative5(t, H, axis=1)
    Fs = sq * (gi[..., 0, 0] * Hs + gi[..., 0, 1] * Ht)
    Ft = sq * (gi[..., 1, 0] * Hs + gi[..., 1, 1] * Ht)
    lap = (derivative5(s, Fs, axis=0) + derivative5(t, Ft, axis=1)) / sq
    res = surface.eps * lap + H * (surface.dN2 - 2.0 * H * H)
    out = np.full(res.shape, np.nan)
    out[2:-2, 2:-2] = res[2:-2, 2:-2]
    return out


def residual_max(surface: RotationalSurface) -> float:
    return float(np.nanmax(np.abs(willmore_residual(surface))))


@dataclass(frozen=True)
class EnergyReport:
    sigma: float
    willmore_area_term: float
    willmore_boundary_term: float
    willmore: float
    residual_field_max: float
    grid: dict

    def as_dict(self):
        return {"sigma": self.sigma, "willmore_area_term": self.willmore_area_term,
                "willmore_boundary_term": self.willmore_boundary_term, "willmore": self.willmore,
                "residual_field_max": self.residual_field_max, "grid": self.grid}


def rectangle(s_window, t_window):
    (s0, s1), (t0, t1) = s_window, t_window
    return [(s0, t0), (s1, t0), (s1, t1), (s0, t1)]


def willmore_energy(surface: RotationalSurface, s_window=None, t_window=None,
                    panels: int = 64) -> EnergyReport:
    """``int H^2 dA + oint k ds`` over a coordinate rectangle of the grid."""
    i = _window_index(surface.s, s_window)
    j = _window_index(surface.t, t_window)
    sw = (surface.s[i[0]], surface.s[i[-1]])
    tw = (surface.t[j[0]], surface.t[j[-1]])
    area_term = _grid_integral(surface, surface.H2, sw, tw)
    poly = gb.polygon(surface.patch(), rectangle(sw, tw))
    boundary = sum(gb.geodesic_curvature_integral(poly.patch, side, panels) for side in poly.sides)
    sig = _grid_integral(surface, surface.dN2, sw, tw)
    try:
        rmax = residual_max(surface)
    except ValueError:
        rmax = float("nan")
    hs = float(np.median(np.diff(surface.s)))
    ht = float(np.median(np.diff(surface.t))) if len(surface.t) > 1 else 0.0
    grid = {"ns": len(surface.s), "nt": len(surface.t), "hs": hs, "ht": ht}
    return EnergyReport(sig, area_term, boundary, area_term + boundary, rmax, grid)


# ----- polygon energies on the underlying smooth patch --------------------------

def _dN2_pointwise(patch):
    def f(p):
        S = np.linalg.solve(patch.metric(p), patch.second_form(p))
        return np.trace(S @ S, axis1=-2, axis2=-1)
    return f


def _H2_pointwise(patch):
    def f(p):
        return patch.mean_curvature(p) ** 2
    return f


@dataclass(frozen=True)
class EquivalenceReport:
    lhs: float
    rhs: float
    gap: float
    sigma: float
    willmore: float
    kappa_integral: float
    angle_sum: float
    lorentzian: bool


def energy_equivalence_check(patch, vertices, level: int = 24, panels: int = 64) -> EquivalenceReport:
    """Compare ``S`` with ``4 W - 6 oint k - 2 sum theta`` (plus ``4 pi`` on Riemannian patches).

    ``patch`` is a surface patch (or RotationalSurface) and ``vertices`` a
    non-null polygon in its parameter plane.
    """
    if isinstance(patch, RotationalSurface):
        patch = patch.patch()
    poly = gb.polygon(patch, vertices)
    sig = gb.area_integral(patch, vertices, _dN2_pointwise(patch), level)
    h2 = gb.area_integral(patch, vertices, _H2_pointwise(patch), level)
    kap = sum(gb.geodesic_curvature_integral(patch, side, panels) for side in poly.sides)
    theta = float(sum(gb.exterior_angles(poly)))
    lor = float(np.linalg.det(patch.metric(np.asarray(vertices[0], float)))) < 0
    W = h2 + kap
    rhs = 4.0 * W - 6.0 * kap - 2.0 * theta + (0.0 if lor else 4.0 * math.pi)
    return EquivalenceReport(sig, rhs, sig - rhs, sig, W, kap, theta, lor)


@dataclass(frozen=True)
class ReductionReport:
    willmore: float
    elastic: float
    gap: float
    area_term: float
    boundary_term: float

    def as_dict(self):
        return {"willmore": self.willmore, "elastic": self.elastic, "gap": self.gap,
                "area_term": self.area_term, "boundary_term": self.boundary_term}


def conformal_willmore(surface: RotationalSurface, s_window=None, t_window=None) -> float:
    """``int (H^2 - eps K) dA``: the pointwise conformally invariant Willmore density."""
    return _grid_integral(surface, surface.H2 - surface.eps * surface.K, s_window, t_window)


def a1_reduction_check(surface: RotationalSurface, t_window=None, panels: int = 64) -> ReductionReport:
    """Conformal Willmore energy against ``(T/4) int k^2 ds`` of the AdS profile.

    ``T`` is the orbit window length (``2 pi`` for full circles). Over full
    orbits ``int H^2 dA - oint k ds`` equals the conformal energy; with the
    boundary oriented as in the Gauss-Bonnet module, ``int H^2 + oint k``
    differs from it by ``2 int eps K dA``. Both terms are reported.
    """
    if surface.kind is not AxisKind.A1 or surface.profile is None:
        raise ValueError("needs an A1 surface generated from an AdS profile")
    j = _window_index(surface.t, t_window)
    tw = (float(surface.t[j[0]]), float(surface.t[j[-1]]))
    T = tw[1] - tw[0]
    W = conformal_willmore(surface, None, tw)
    rep = willmore_energy(surface, None, tw, panels)
    k2 = float(np.trapezoid(surface.profile.kappa ** 2, surface.profile.s))
    E = T / 4.0 * k2
    return ReductionReport(W, E, abs(W - E) / max(1.0, abs(W)),
                           rep.willmore_area_term, rep.willmore_boundary_term)


# ----- presets -----------------------------------------------------------------

def preset(name: str, r: float = 1.0, A: float = 1.0, ns: int = 401, nt: int = 33,
           s_range=None, t_range=None) -> RotationalSurface:
    """Reference surfaces: plane, cylinder, hyperboloid, saddle, two-sheet."""
    t_default = (0.0, 1.0)
    if name == "plane":
        m = line_meridian(AxisKind.A2, (A, 0.0, 0.0), (0.0, 0.0, 1.0))
        s_default = (0.5, 2.0)
    elif name == "cylinder":
        m = line_meridian(AxisKind.A1, (0.0, r, 0.0), (1.0, 0.0, 0.0))
        s_default, t_default = (-1.0, 1.0), (0.0, 2 * math.pi)
    elif name == "hyperboloid":
        m = hyperboloid_meridian(r)
        s_default = (0.2, 1.2)
    elif name == "saddle":
        m = saddle_meridian()
        s_default = (0.1, 1.0)
    elif name == "two-sheet":
        m = two_sheet_meridian()
        s_default = (0.2, 1.5)
    else:
        raise ValueError(f"unknown preset {name!r}")
    s0, s1 = s_range or s_default
    t0, t1 = t_range or t_default
    return generate_surface(m.kind, m, np.linspace(t0, t1, nt), np.linspace(s0, s1, ns))


def saddle_meridian(s_range=(0.1, 1.0)) -> Meridian:
    """(s^2, s, 0): the piece of x = y^2 - z^2 with y^2 > z^2, swept by A2 boosts."""

    def func(s):
        s = np.asarray(s, dtype=float)
        z = np.zeros(s.shape)
        return (np.stack([s * s, s, z], -1), np.stack([2 * s, z + 1.0, z], -1),
                np.stack([z + 2.0, z, z], -1))

    return Meridian(AxisKind.A2, func, s_range)


PRESETS = ("plane", "cylinder", "hyperboloid", "saddle", "two-sheet")
