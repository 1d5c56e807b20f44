"""Real Jacobi elliptic functions and the complete integral of the first kind.

All functions take the parameter ``m = k**2``. Values of ``m`` outside
``[0, 1]`` are mapped back into that range with the imaginary-modulus
transformation (``m < 0``) or the reciprocal-modulus transformation
(``m > 1``); both keep the results real.
"""
from __future__ import annotations

import math

import numpy as np

from . import kernels

TAU_POLE = 1e-8


class PoleError(ArithmeticError):
    """Raised when a requested value sits on a pole; ``location`` is the pole."""

    def __init__(self, location: float, message: str = ""):
        self.location = float(location)
        super().__init__(message or f"pole at {self.location!r}")


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    for _ in range(60):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return a


def complete_K(m: float) -> float:
    """K(m) = integral of 1/sqrt(1 - m sin^2) over [0, pi/2], for m < 1."""
    m = float(m)
    if not m < 1.0:
        raise ValueError("K(m) diverges for m >= 1")
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - m)))


def _scalar_out(u, *arrays):
    if np.ndim(u) == 0:
        return tuple(float(np.asarray(a).reshape(-1)[0]) for a in arrays)
    return arrays


def ellipj(u, m: float):
    """Return ``(sn, cn, dn)`` at real ``u`` for any real parameter ``m``."""
    m = float(m)
    uu = np.asarray(u, dtype=float)
    if 0.0 <= m <= 1.0:
        sn, cn, dn = kernels.ellipj_core(uu, m)
    elif m < 0.0:
        n = -m
        r = math.sqrt(1.0 + n)
        s, c, d = kernels.ellipj_core(uu * r, n / (1.0 + n))
        sn, cn, dn = s / (d * r), c / d, 1.0 / d
    else:
        r = math.sqrt(m)
        s, c, d = kernels.ellipj_core(uu * r, 1.0 / m)
        sn, cn, dn = s / r, d, c
    return _scalar_out(u, sn, cn, dn)


def jacobi_sn(u, k2: float):
    return ellipj(u, k2)[0]


def jacobi_cn(u, k2: float):
    return ellipj(u, k2)[1]


def jacobi_dn(u, k2: float):
    return ellipj(u, k2)[2]


def cn_zeros_spacing(m: float):
    """Half-spacing K of the real zeros (2n+1)K of cn(.|m), or None if cn has none."""
    if m >= 1.0:
        return None
    return complete_K(m)


def nearest_cn_zero(u: float, m: float):
    K = cn_zeros_spacing(m)
    if K is None:
        return None
    n = round((u / K - 1.0) / 2.0)
    return (2 * n + 1) * K


def cn_imag_arg(u, k2: float, tau_pole: float = TAU_POLE):
    """Real value of cn(i u | k2) = 1 / cn(u | 1 - k2), for 0 <= k2 <= 1."""
    k2 = float(k2)
    if not 0.0 <= k2 <= 1.0:
        raise ValueError("cn_imag_arg needs 0 <= k2 <= 1")
    mc = 1.0 - k2
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    K = cn_zeros_spacing(mc)
    if K is not None:
        n = np.round((uu / K - 1.0) / 2.0)
        poles = (2 * n + 1) * K
        hit = np.abs(uu - poles) <= tau_pole
        if np.any(hit):
            raise PoleError(poles[np.argmax(hit)])
    cn = ellipj(uu, mc)[1]
    out = 1.0 / cn
    return float(out[0]) if np.ndim(u) == 0 else out
