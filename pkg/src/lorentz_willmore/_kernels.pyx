# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: Landen recursion for sn/cn/dn and the RK4 Frenet stepper."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, asin, cosh, tanh, fabs, ldexp

cnp.import_array()

cdef enum:
    MAX_AGM = 40


def ellipj_core(u, double m):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64).ravel()
    cdef Py_ssize_t npts = uu.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sn = np.empty(npts)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cn = np.empty(npts)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dn = np.empty(npts)
    cdef double a[MAX_AGM]
    cdef double c[MAX_AGM]
    cdef double b, an, phi, sech
    cdef int n = 0, k
    shape = np.shape(u)
    if m >= 1.0 - 1e-16:
        for i in range(npts):
            sech = 1.0 / cosh(uu[i])
            sn[i] = tanh(uu[i])
            cn[i] = sech
            dn[i] = sech
        return sn.reshape(shape), cn.reshape(shape), dn.reshape(shape)
    a[0] = 1.0
    c[0] = sqrt(m)
    b = sqrt(1.0 - m)
    while fabs(c[n]) > 1e-17 * a[n] and n < MAX_AGM - 1:
        an = 0.5 * (a[n] + b)
        c[n + 1] = 0.5 * (a[n] - b)
        b = sqrt(a[n] * b)
        a[n + 1] = an
        n += 1
    for i in range(npts):
        phi = ldexp(a[n] * uu[i], n)
        for k in range(n, 0, -1):
            phi = 0.5 * (phi + asin(c[k] / a[k] * sin(phi)))
        sn[i] = sin(phi)
        cn[i] = cos(phi)
        # (1 - m) + m cn^2 has no cancellation, unlike 1 - m sn^2 or cn / cos(...)
        dn[i] = sqrt((1.0 - m) + m * cn[i] * cn[i])
    return sn.reshape(shape), cn.reshape(shape), dn.reshape(shape)


cdef inline void _rhs(double x, double w, double tx, double tw, double kap,
                      double g00, double g01, double g11, double eps1,
                      double* out) nogil:
    cdef double det = g00 * g11 - g01 * g01
    cdef double gx = g00 * tx + g01 * tw
    cdef double gw = g01 * tx + g11 * tw
    cdef double conn = 2.0 * tw / w
    cdef double c = eps1 * w / det
    out[0] = tx
    out[1] = tw
    out[2] = det * kap * (-gw) + conn * tx + c * g01
    out[3] = det * kap * gx + conn * tw - c * g00


def rk4_frenet(kh, double x0, double w0, double tx0, double tw0, double h,
               int nsteps, double g00, double g01, double g11, double eps1,
               double tau_bdry):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] k = np.ascontiguousarray(kh, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((nsteps + 1, 4))
    cdef double s[4]
    cdef double a[4]
    cdef double b[4]
    cdef double c[4]
    cdef double d[4]
    cdef double q, r
    cdef int i, j, done = 0
    s[0] = x0; s[1] = w0; s[2] = tx0; s[3] = tw0
    for j in range(4):
        out[0, j] = s[j]
    with nogil:
        for i in range(nsteps):
            _rhs(s[0], s[1], s[2], s[3], k[2 * i], g00, g01, g11, eps1, a)
            _rhs(s[0] + 0.5 * h * a[0], s[1] + 0.5 * h * a[1], s[2] + 0.5 * h * a[2],
                 s[3] + 0.5 * h * a[3], k[2 * i + 1], g00, g01, g11, eps1, b)
            _rhs(s[0] + 0.5 * h * b[0], s[1] + 0.5 * h * b[1], s[2] + 0.5 * h * b[2],
                 s[3] + 0.5 * h * b[3], k[2 * i + 1], g00, g01, g11, eps1, c)
            _rhs(s[0] + h * c[0], s[1] + h * c[1], s[2] + h * c[2], s[3] + h * c[3],
                 k[2 * i + 2], g00, g01, g11, eps1, d)
            for j in range(4):
                s[j] = s[j] + h / 6.0 * (a[j] + 2.0 * b[j] + 2.0 * c[j] + d[j])
            q = (g00 * s[2] * s[2] + 2.0 * g01 * s[2] * s[3] + g11 * s[3] * s[3]) / (s[1] * s[1])
            if q * eps1 <= 0.0 or fabs(s[1]) < tau_bdry or fabs(s[1]) * tau_bdry > 1.0:
                break
            r = 1.0 / sqrt(q * eps1)
            s[2] = s[2] * r
            s[3] = s[3] * r
            for j in range(4):
                out[i + 1, j] = s[j]
            done = i + 1
    return out, done
