"""Backend selection for the hot kernels.

The compiled extension is used when it imports; setting ``LW_PURE_PYTHON=1``
forces the pure-Python fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("LW_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"


def ellipj_core(u, m):
    return _impl.ellipj_core(u, m)


def rk4_frenet(*args):
    return _impl.rk4_frenet(*args)


def backends():
    """Available kernel modules keyed by name."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels as _compiled
    except ImportError:
        return out
    out["compiled"] = _compiled
    return out
