"""Free elastica in the conformal half-plane models.

A profile's curvature solves ``2 k'' + sigma k^3 + 2 rho k = 0`` with
``sigma = eps1 * eps2`` and ``rho = G * eps1``, where ``G`` is the Gaussian
curvature used for the elastica equation. For the Lorentzian models this is
``2 k'' - k^3 + 2 e k = 0`` with ``e = -G eps1``; for the Riemannian
hyperbolic half-plane it is ``2 k'' + k^3 - 2 k = 0``.

Every non-trivial solution with ``k(a0) = C`` and ``k'(a0) = 0`` is
``C cn(lam (s - a0) | m)`` with ``lam^2 = rho + sigma C^2 / 2`` and
``m = sigma C^2 / (4 lam^2)``. Imaginary ``lam`` is handled with
``cn(i u | m) = 1 / cn(u | 1 - m)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._numerics import derivative5
from .elliptic import TAU_POLE, PoleError, complete_K, ellipj

RK4_STEP = 1e-3
TAU_BDRY = 1e-6
TAU_EXCLUDED_C = 1e-6


class ModelKind(enum.Enum):
    ADS_A1 = "AdS_A1"
    DESITTER_R = "DeSitter_R"
    HYPERBOLIC_Q = "Hyperbolic_Q"
    ADS_A3 = "AdS_A3"


_G0 = {
    ModelKind.ADS_A1: ((-1.0, 0.0), (0.0, 1.0)),
    ModelKind.DESITTER_R: ((1.0, 0.0), (0.0, -1.0)),
    ModelKind.HYPERBOLIC_Q: ((1.0, 0.0), (0.0, 1.0)),
    ModelKind.ADS_A3: ((0.0, -1.0), (-1.0, 0.0)),
}

# Curvature the elastica equation is written with, as stated for each model.
_STATED_CURVATURE = {
    ModelKind.ADS_A1: -1.0,
    ModelKind.DESITTER_R: 1.0,
    ModelKind.HYPERBOLIC_Q: -1.0,
    ModelKind.ADS_A3: -1.0,
}

# Curvature of the metric G0 / w^2 itself; -2 dx dy / y^2 is flat (y -> -1/y).
_METRIC_CURVATURE = {
    ModelKind.ADS_A1: -1.0,
    ModelKind.DESITTER_R: 1.0,
    ModelKind.HYPERBOLIC_Q: -1.0,
    ModelKind.ADS_A3: 0.0,
}


@dataclass(frozen=True)
class HalfPlaneModel:
    """Half-plane ``{sign_half * w > 0}`` with metric ``G0 / w**2``."""

    kind: ModelKind = ModelKind.ADS_A1
    sign_half: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.sign_half not in (1, -1):
            raise ValueError("sign_half must be +1 or -1")

    @property
    def G0(self) -> np.ndarray:
        return np.array(_G0[self.kind])

    @property
    def det_sign(self) -> int:
        return 1 if np.linalg.det(self.G0) > 0 else -1

    @property
    def lorentzian(self) -> bool:
        return self.det_sign < 0

    @property
    def stated_curvature(self) -> float:
        return _STATED_CURVATURE[self.kind]

    @property
    def metric_curvature(self) -> float:
        return _METRIC_CURVATURE[self.kind]

    def in_domain(self, pos) -> bool:
        return bool(self.sign_half * np.asarray(pos)[..., 1] > 0)

    def inner(self, pos, u, v):
        """Model metric ``g(u, v)`` at ``pos``; batched over leading axes."""
        w = np.asarray(pos)[..., 1]
        return np.einsum("...i,ij,...j->...", u, self.G0, v) / (w * w)

    def normal(self, tan, eps1: int):
        """Unit normal N with g(N, N) = eps2 and det(T, N) > 0."""
        g = np.einsum("ij,...j->...i", self.G0, tan)
        return eps1 * np.stack([-g[..., 1], g[..., 0]], axis=-1)

    def connection(self, pos, u, v):
        """Christoffel term Gamma(u, v), so that nabla_u V = dV(u) + Gamma(u, V)."""
        w = np.asarray(pos)[..., 1][..., None]
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        uphi = -u[..., 1:2] / w
        vphi = -v[..., 1:2] / w
        g0uv = np.einsum("...i,ij,...j->...", u, self.G0, v)[..., None]
        grad = np.linalg.inv(self.G0)[:, 1] * (-1.0 / w)
        return uphi * v + vphi * u - g0uv * grad

    def frenet_acceleration(self, pos, tan, kappa, eps1: int):
        """dT/ds for a unit-speed Frenet curve with curvature ``kappa``."""
        eps2 = self.det_sign * eps1
        N = self.normal(tan, eps1)
        return eps2 * np.asarray(kappa)[..., None] * N - self.connection(pos, tan, tan)


class Family(enum.Enum):
    GEODESIC = "Geodesic"
    CN = "CnFamily"
    CONSTANT = "ConstantCritical"


@dataclass(frozen=True)
class ExcludedSet:
    poles: tuple
    window: tuple

    def __len__(self):
        return len(self.poles)

    def near(self, s, tau: float = TAU_POLE):
        for p in self.poles:
            if abs(s - p) <= tau:
                return p
        return None


@dataclass(frozen=True)
class ElasticaProfile:
    """Curvature function of a free elastica.

    ``eps1`` and ``eps2`` are the causal signs of the tangent and the normal;
    ``gauss_curvature`` overrides the curvature used in the elastica equation
    (default: the model's stated curvature).
    """

    family: Family = Family.CN
    C: float = 1.0
    a0: float = 0.0
    eps1: int = 1
    eps2: int = -1
    model: HalfPlaneModel = field(default_factory=HalfPlaneModel)
    gauss_curvature: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "C", float(self.C))
        object.__setattr__(self, "a0", float(self.a0))
        if self.eps1 not in (1, -1) or self.eps2 not in (1, -1):
            raise ValueError("causal signs must be +1 or -1")
        if self.eps2 != self.model.det_sign * self.eps1:
            raise ValueError(
                f"eps1={self.eps1}, eps2={self.eps2} impossible in {self.model.kind.value}")
        if not self.model.lorentzian and self.eps1 != int(np.sign(self.model.G0[0, 0])):
            raise ValueError(f"no curve with eps1={self.eps1} in {self.model.kind.value}")
        if self.family is Family.CN:
            if abs(self.lam2) <= TAU_EXCLUDED_C * max(1.0, abs(self.rho)):
                raise ValueError(
                    f"C={self.C!r} is excluded: C^2 = {-2 * self.rho / self.sigma:g} "
                    "makes the cn family degenerate")
        elif self.family is Family.CONSTANT:
            target = -2.0 * self.rho / self.sigma
            if target <= 0:
                raise ValueError("no constant critical curvature for these signs")
            value = math.copysign(math.sqrt(target), self.C if self.C else 1.0)
            object.__setattr__(self, "C", value)
        else:
            object.__setattr__(self, "C", 0.0)

    @property
    def G(self) -> float:
        if self.gauss_curvature is not None:
            return float(self.gauss_curvature)
        return self.model.stated_curvature

    @property
    def sigma(self) -> int:
        return self.eps1 * self.eps2

    @property
    def rho(self) -> float:
        return self.G * self.eps1

    @property
    def equation_sign(self) -> float:
        """The ``e`` of ``2 k'' - k^3 + 2 e k = 0`` (Lorentzian models)."""
        return -self.rho * self.sigma

    @property
    def lam2(self) -> float:
        return self.rho + 0.5 * self.sigma * self.C ** 2

    @property
    def modulus(self) -> float:
        """Parameter m (the squared modulus) of the cn family."""
        return self.sigma * self.C ** 2 / (4.0 * self.lam2)

    @property
    def has_poles(self) -> bool:
        return self.family is Family.CN and self.lam2 < 0 and self.modulus > 0

    def pole_spacing(self) -> float | None:
        """Half-spacing E'/|lam| with E' = K(1 - m); poles at a0 + (2n+1) * this."""
        if not self.has_poles:
            return None
        return complete_K(1.0 - self.modulus) / math.sqrt(-self.lam2)

    def _check_poles(self, s, tau_pole: float = TAU_POLE):
        d = self.pole_spacing()
        if d is None:
            return
        x = np.atleast_1d(np.asarray(s, dtype=float)) - self.a0
        n = np.round((x / d - 1.0) / 2.0)
        poles = self.a0 + (2 * n + 1) * d
        hit = np.abs(self.a0 + x - poles) <= tau_pole
        if np.any(hit):
            raise PoleError(poles[np.argmax(hit)])

    def jet(self, s, check: bool = True):
        """Return (k, k', k'') at ``s``, using cn' = -sn dn."""
        s_arr = np.asarray(s, dtype=float)
        if self.family is not Family.CN:
            k = np.full(s_arr.shape, self.C)
            z = np.zeros(s_arr.shape)
            return k, z, z.copy()
        if check:
            self._check_poles(s_arr)
        x = s_arr - self.a0
        C, m, lam2 = self.C, self.modulus, self.lam2
        if lam2 > 0:
            lam = math.sqrt(lam2)
            sn, cn, dn = ellipj(lam * x, m)
            k = C * cn
            k1 = -C * lam * sn * dn
            k2 = -C * lam2 * cn * (dn * dn - m * sn * sn)
        else:
            mu = math.sqrt(-lam2)
            M = 1.0 - m
            sn, cn, dn = ellipj(mu * x, M)
            k = C / cn
            k1 = C * mu * sn * dn / (cn * cn)
            k2 = C * mu * mu * ((dn * dn - M * sn * sn) / cn + 2.0 * sn * sn * dn * dn / cn ** 3)
        return np.asarray(k), np.asarray(k1), np.asarray(k2)

    def curvature(self, s):
        return self.jet(s)[0]

    def __call__(self, s):
        return self.curvature(s)


def geodesic_profile(model: HalfPlaneModel | None = None, eps1: int = 1) -> ElasticaProfile:
    model = model or HalfPlaneModel()
    return ElasticaProfile(Family.GEODESIC, 0.0, 0.0, eps1, model.det_sign * eps1, model)


def curvature_at(profile: ElasticaProfile, s: float) -> float:
    """Curvature at ``s``; raises PoleError within TAU_POLE of a pole."""
    return float(profile.jet(float(s))[0])


def el_residual(profile: ElasticaProfile, s, method: str = "analytic", h: float = 1e-4):
    """Residual of ``2 k'' + sigma k^3 + 2 rho k`` at ``s``.

    ``method="fd"`` uses a 5-point central difference for k''.
    """
    if profile.family is Family.GEODESIC:
        return np.zeros(np.shape(s)) if np.ndim(s) else 0.0
    if method == "analytic":
        k, _, k2 = profile.jet(s)
    else:
        s_arr = np.asarray(s, dtype=float)
        f = [profile.curvature(s_arr + j * h) for j in (-2, -1, 0, 1, 2)]
        k = f[2]
        k2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    r = 2.0 * k2 + profile.sigma * k ** 3 + 2.0 * profile.rho * k
    return float(r) if np.ndim(r) == 0 else r


def excluded_domain(profile: ElasticaProfile, window) -> ExcludedSet:
    """Pole abscissas ``a0 + (2n+1) E'/|lam|`` lying in ``window``."""
    lo, hi = float(window[0]), float(window[1])
    d = profile.pole_spacing()
    if d is None:
        return ExcludedSet((), (lo, hi))
    nlo = math.ceil(((lo - profile.a0) / d - 1.0) / 2.0)
    nhi = math.floor(((hi - profile.a0) / d - 1.0) / 2.0)
    poles = tuple(profile.a0 + (2 * n + 1) * d for n in range(nlo, nhi + 1))
    return ExcludedSet(poles, (lo, hi))


def pole_free_window(profile: ElasticaProfile, fraction: float = 0.9, default: float = 5.0):
    """Symmetric window around a0 inside the first poles (or of half-width ``default``)."""
    d = profile.pole_spacing()
    half = default if d is None else fraction * d
    return profile.a0 - half, profile.a0 + half


@dataclass
class ProfileCurve:
    """Arclength-sampled curve in a half-plane model."""

    model: HalfPlaneModel
    eps1: int
    s: np.ndarray
    pos: np.ndarray
    tan: np.ndarray
    kappa: np.ndarray
    terminated_early: bool = False

    @property
    def eps2(self) -> int:
        return self.model.det_sign * self.eps1

    def __len__(self):
        return len(self.s)

    def acceleration(self) -> np.ndarray:
        return self.model.frenet_acceleration(self.pos, self.tan, self.kappa, self.eps1)

    def normal(self) -> np.ndarray:
        return self.model.normal(self.tan, self.eps1)

    def unit_speed_defect(self) -> float:
        q = self.model.inner(self.pos, self.tan, self.tan)
        return float(np.max(np.abs(q - self.eps1)))

    def recomputed_curvature(self) -> np.ndarray:
        """Curvature from finite differences of the sampled tangent."""
        dT = derivative5(self.s, self.tan)
        acc = dT + self.model.connection(self.pos, self.tan, self.tan)
        return self.model.inner(self.pos, acc, self.normal())

    def rows(self):
        for i in range(len(self.s)):
            yield (self.s[i], self.pos[i, 0], self.pos[i, 1],
                   self.tan[i, 0], self.tan[i, 1], self.kappa[i])


def _eval_kappa(kappa, s):
    if isinstance(kappa, (int, float)):
        return np.full(s.shape, float(kappa))
    try:
        out = np.asarray(kappa(s), dtype=float)
        if out.shape == s.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(kappa(v)) for v in s])


def _integrate_leg(model, kappa, pos, tan, s0, s1, step, eps1, tau_bdry):
    length = s1 - s0
    n = max(1, int(round(abs(length) / step)))
    h = length / n
    s_half = s0 + 0.5 * h * np.arange(2 * n + 1)
    kh = _eval_kappa(kappa, s_half)
    G = model.G0
    out, done = kernels.rk4_frenet(kh, float(pos[0]), float(pos[1]), float(tan[0]),
                                   float(tan[1]), h, n, G[0, 0], G[0, 1], G[1, 1],
                                   float(eps1), tau_bdry)
    out = out[: done + 1]
    s = s0 + h * np.arange(done + 1)
    return s, out, kh[: 2 * done + 1 : 2], done < n


def integrate_frenet(model: HalfPlaneModel, kappa, start_pos, start_tangent, span,
                     step: float = RK4_STEP, eps1: int | None = None,
                     start_s: float | None = None, tau_bdry: float = TAU_BDRY) -> ProfileCurve:
    """Integrate the Frenet system by fixed-step RK4 over ``span``.

    ``kappa`` is a constant, a callable of arclength, or an ElasticaProfile.
    The start point sits at ``start_s`` (default ``span[0]``); the curve is
    integrated both ways from there. Integration stops early, with
    ``terminated_early`` set, when the curve comes within ``tau_bdry`` of the
    boundary.
    """
    pos = np.asarray(start_pos, dtype=float)
    tan = np.asarray(start_tangent, dtype=float)
    if not model.in_domain(pos) or abs(pos[1]) <= tau_bdry:
        raise ValueError("start point must lie strictly inside the half-plane")
    q = float(model.inner(pos, tan, tan))
    if eps1 is None:
        eps1 = int(np.sign(q)) if q != 0 else 0
        if isinstance(kappa, ElasticaProfile):
            eps1 = kappa.eps1
    if eps1 not in (1, -1) or abs(q - eps1) > 1e-8:
        raise ValueError(f"start tangent must be unit with g(T,T)={eps1}; got {q!r}")
    if isinstance(kappa, ElasticaProfile) and kappa.eps1 != eps1:
        raise ValueError("profile causal sign disagrees with the start tangent")
    lo, hi = float(span[0]), float(span[1])
    s_start = lo if start_s is None else float(start_s)
    pieces = []
    early = False
    if hi > s_start:
        s, out, k, cut = _integrate_leg(model, kappa, pos, tan, s_start, hi, step, eps1, tau_bdry)
        pieces.append((s, out, k))
        early |= cut
    if lo < s_start:
        s, out, k, cut = _integrate_leg(model, kappa, pos, tan, s_start, lo, step, eps1, tau_bdry)
        pieces.insert(0, (s[::-1], out[::-1], k[::-1]))
        early |= cut
    if len(pieces) == 2:
        s = np.concatenate([pieces[0][0][:-1], pieces[1][0]])
        out = np.concatenate([pieces[0][1][:-1], pieces[1][1]])
        k = np.concatenate([pieces[0][2][:-1], pieces[1][2]])
    else:
        s, out, k = pieces[0]
    return ProfileCurve(model, eps1, s, out[:, :2].copy(), out[:, 2:].copy(), k, early)


def total_squared_curvature(curve: ProfileCurve) -> float:
    if len(curve.s) < 2:
        raise ValueError("need at least two samples")
    return float(np.trapezoid(curve.kappa ** 2, curve.s))


def standard_start(model: HalfPlaneModel, eps1: int):
    """Start point (0, w=sign_half) and a unit tangent with ``g(T, T) = eps1`` there."""
    pos = np.array([0.0, float(model.sign_half)])
    G = model.G0
    if model.kind is ModelKind.ADS_A3:
        tan = np.array([-0.5 * eps1, 1.0])
    elif G[0, 0] == eps1:
        tan = np.array([1.0, 0.0])
    elif G[1, 1] == eps1:
        tan = np.array([0.0, 1.0])
    else:
        raise ValueError(f"no tangent with g(T,T)={eps1} in {model.kind.value}")
    return pos, tan


def generating_profile(kind: ModelKind, C: float = 1.0, eps1: int = 1,
                       family: Family = Family.CN, a0: float = 0.0,
                       sign_half: int = 1) -> ElasticaProfile:
    """Elastica curvature written with the true curvature of the model's metric.

    This is the profile whose rotation surface is Willmore; for the flat
    light-like model it differs from the stated-curvature profile.
    """
    model = HalfPlaneModel(kind, sign_half)
    return ElasticaProfile(family, C, a0, eps1, model.det_sign * eps1, model,
                           gauss_curvature=model.metric_curvature)


def generating_curve(profile: ElasticaProfile, half_width: float = 0.6,
                     step: float = RK4_STEP, w_band: float = 4.0) -> ProfileCurve:
    """Integrate ``profile`` from the standard start over ``a0 +- half_width``,
    clipped to the pole-free window.

    The curve is cut where ``|w|`` leaves ``[1/w_band, w_band]``: beyond that a
    fixed arclength step no longer resolves it.
    """
    lo, hi = pole_free_window(profile, default=half_width)
    lo = max(lo, profile.a0 - half_width)
    hi = min(hi, profile.a0 + half_width)
    pos, tan = standard_start(profile.model, profile.eps1)
    curve = integrate_frenet(profile.model, profile, pos, tan, (lo, hi), step,
                             profile.eps1, start_s=profile.a0)
    w = np.abs(curve.pos[:, 1])
    bad = (w > w_band) | (w < 1.0 / w_band)
    if not np.any(bad):
        return curve
    i0 = int(np.searchsorted(curve.s, profile.a0))
    left = np.nonzero(bad[:i0])[0]
    right = np.nonzero(bad[i0:])[0]
    a = left[-1] + 1 if len(left) else 0
    b = i0 + right[0] if len(right) else len(curve.s)
    return ProfileCurve(curve.model, curve.eps1, curve.s[a:b], curve.pos[a:b], curve.tan[a:b],
                        curve.kappa[a:b], True)
