import pytest

from lorentz_willmore.catalog import CATALOG, catalog_table
from lorentz_willmore.elastica import HalfPlaneModel, ModelKind, generating_curve
from lorentz_willmore.minkowski import AxisKind


def test_seven_rows():
    assert len(CATALOG) == 7
    groups = [r.group for r in CATALOG]
    assert groups.count("A1") == 2 and groups.count("A2") == 3 and groups.count("A3") == 2
    assert {r.axis_kind for r in CATALOG} == set(AxisKind)


def test_sign_pairs_follow_the_model():
    for row in CATALOG:
        model = HalfPlaneModel(row.model)
        assert row.eps2 == model.det_sign * row.eps1
        # Riemannian surfaces come from space-like curves in the Lorentzian models
        if model.lorentzian:
            assert (row.surface == "Riemannian") == (row.eps1 == 1)
    q = [r for r in CATALOG if r.model is ModelKind.HYPERBOLIC_Q]
    assert len(q) == 1 and q[0].surface == "Lorentzian"


def test_table_is_serializable():
    rows = catalog_table()
    assert all(set(r) == {"group", "axis", "orbits", "surface", "generating_curve", "model",
                          "eps1", "eps2"} for r in rows)
    assert rows[0]["orbits"] == "Circles" and rows[-1]["orbits"] == "Parabolas"


@pytest.mark.parametrize("row", CATALOG, ids=lambda r: f"{r.group}-{r.model.value}-{r.eps1}")
def test_every_row_generates_a_curve(row):
    c = generating_curve(row.profile(1.0))
    assert len(c.s) > 100
    assert c.unit_speed_defect() < 1e-7
