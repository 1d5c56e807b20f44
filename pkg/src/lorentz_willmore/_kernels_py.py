"""Pure-Python reference kernels; same signatures as the compiled module."""
import math

import numpy as np

MAX_AGM = 40


def agm_tables(m):
    """AGM sequences a_n, c_n for parameter 0 <= m < 1 (DLMF 22.20.1)."""
    a = [1.0]
    c = [math.sqrt(m)]
    b = math.sqrt(1.0 - m)
    while abs(c[-1]) > 1e-17 * a[-1] and len(a) < MAX_AGM:
        an = 0.5 * (a[-1] + b)
        c.append(0.5 * (a[-1] - b))
        b = math.sqrt(a[-1] * b)
        a.append(an)
    return a, c


def ellipj_core(u, m):
    """sn, cn, dn for real u and 0 <= m <= 1 by descending Landen recursion."""
    shape = np.shape(u)
    u = np.asarray(u, dtype=float)
    if m >= 1.0 - 1e-16:
        sech = 1.0 / np.cosh(u)
        return np.tanh(u), sech, sech.copy()
    a, c = agm_tables(m)
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * u
    for k in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[k] / a[k] * np.sin(phi)))
    sn, cn = np.sin(phi), np.cos(phi)
    # (1 - m) + m cn^2 has no cancellation, unlike 1 - m sn^2 or cn / cos(...)
    dn = np.sqrt((1.0 - m) + m * cn * cn)
    return sn.reshape(shape), cn.reshape(shape), dn.reshape(shape)


def _rhs(x, w, tx, tw, kap, g00, g01, g11, eps1):
    det = g00 * g11 - g01 * g01
    gx = g00 * tx + g01 * tw
    gw = g01 * tx + g11 * tw
    conn = 2.0 * tw / w
    c = eps1 * w / det
    ax = det * kap * (-gw) + conn * tx + c * g01
    aw = det * kap * gx + conn * tw - c * g00
    return tx, tw, ax, aw


def rk4_frenet(kh, x0, w0, tx0, tw0, h, nsteps, g00, g01, g11, eps1, tau_bdry):
    """Fixed-step RK4 for the Frenet system of the conformal metric G0/w^2.

    ``kh`` holds curvature values at multiples of h/2 (length 2*nsteps+1).
    Returns the state array (nsteps+1, 4) and the number of completed steps.
    """
    out = np.empty((nsteps + 1, 4))
    x, w, tx, tw = x0, w0, tx0, tw0
    out[0] = (x, w, tx, tw)
    done = 0
    for i in range(nsteps):
        k0, k1, k2 = kh[2 * i], kh[2 * i + 1], kh[2 * i + 2]
        a = _rhs(x, w, tx, tw, k0, g00, g01, g11, eps1)
        b = _rhs(x + 0.5 * h * a[0], w + 0.5 * h * a[1], tx + 0.5 * h * a[2],
                 tw + 0.5 * h * a[3], k1, g00, g01, g11, eps1)
        c = _rhs(x + 0.5 * h * b[0], w + 0.5 * h * b[1], tx + 0.5 * h * b[2],
                 tw + 0.5 * h * b[3], k1, g00, g01, g11, eps1)
        d = _rhs(x + h * c[0], w + h * c[1], tx + h * c[2], tw + h * c[3],
                 k2, g00, g01, g11, eps1)
        x += h / 6.0 * (a[0] + 2 * b[0] + 2 * c[0] + d[0])
        w += h / 6.0 * (a[1] + 2 * b[1] + 2 * c[1] + d[1])
        tx += h / 6.0 * (a[2] + 2 * b[2] + 2 * c[2] + d[2])
        tw += h / 6.0 * (a[3] + 2 * b[3] + 2 * c[3] + d[3])
        q = (g00 * tx * tx + 2 * g01 * tx * tw + g11 * tw * tw) / (w * w)
        if q * eps1 <= 0.0 or abs(w) < tau_bdry or abs(w) * tau_bdry > 1.0:
            break
        r = 1.0 / math.sqrt(q * eps1)
        tx *= r
        tw *= r
        out[i + 1] = (x, w, tx, tw)
        done = i + 1
    return out, done
