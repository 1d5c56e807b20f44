"""Small finite-difference helpers shared by several modules."""
import numpy as np


def derivative5(s, f, axis: int = 0):
    """First derivative of samples ``f`` along ``axis`` by 5-point stencils.

    Works on non-uniform grids; weights come from the local Vandermonde system.
    """
    s = np.asarray(s, dtype=float)
    f = np.moveaxis(np.asarray(f, dtype=float), axis, 0)
    n = len(s)
    if n < 5:
        return np.moveaxis(np.gradient(f, s, axis=0), 0, axis)
    start = np.clip(np.arange(n) - 2, 0, n - 5)
    idx = start[:, None] + np.arange(5)
    dx = s[idx] - s[:, None]
    V = dx[:, None, :] ** np.arange(5)[None, :, None]
    rhs = np.zeros((n, 5))
    rhs[:, 1] = 1.0
    w = np.linalg.solve(V, rhs[..., None])[..., 0]
    return np.moveaxis(np.einsum("ik,ik...->i...", w, f[idx]), 0, axis)
