import numpy as np
import pytest

from lorentz_willmore import kernels
from lorentz_willmore._kernels_py import ellipj_core as py_ellipj


def test_backend_selected():
    assert kernels.BACKEND in kernels.backends()
    assert "python" in kernels.backends()


@pytest.mark.parametrize("m", [0.0, 1e-12, 0.3, 0.9, 0.999999, 1.0])
def test_ellipj_backends_agree(m):
    u = np.linspace(-20, 20, 4001)
    ref = py_ellipj(u, m)
    for mod in kernels.backends().values():
        out = mod.ellipj_core(u, m)
        for a, b in zip(out, ref):
            assert np.max(np.abs(np.asarray(a) - b)) < 1e-14


def test_python_kernel_keeps_shape():
    sn, cn, dn = py_ellipj(np.zeros((3, 4)), 0.5)
    assert sn.shape == cn.shape == dn.shape == (3, 4)
