import pytest

from lorentz_willmore import kernels


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    monkeypatch.setattr(kernels, "_impl", kernels.backends()[request.param])
    return request.param
