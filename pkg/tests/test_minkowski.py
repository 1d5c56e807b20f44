import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from lorentz_willmore.minkowski import (CHART_A1, CHART_A2, CHART_A3, AxisKind, CausalCharacter,
                                        ChartMismatch, MVec3, OrbitKind, RegionLabel,
                                        causal_character, chart_for, fundamental_region, generator,
                                        lorentz_cross, lorentz_dot, orbit_descriptor, rotation,
                                        rotation_matrix)

finite = st.floats(-5, 5, allow_nan=False)
vec = st.tuples(finite, finite, finite)
kinds = st.sampled_from(list(AxisKind))


def test_dot_examples():
    assert lorentz_dot(MVec3((1, 0, 0), CHART_A2), MVec3((1, 0, 0), CHART_A2)) == 1
    assert lorentz_dot(MVec3((0, 0, 1), CHART_A2), MVec3((0, 0, 1), CHART_A2)) == -1
    assert lorentz_dot(MVec3((1, 0, 0), CHART_A3), MVec3((0, 1, 0), CHART_A3)) == -1


def test_chart_metrics():
    assert np.array_equal(CHART_A1.metric, np.diag([-1.0, 1, 1]))
    assert np.array_equal(CHART_A2.metric, np.diag([1.0, 1, -1]))
    assert np.array_equal(CHART_A3.metric, [[0, -1, 0], [-1, 0, 0], [0, 0, 1]])


def test_chart_mismatch():
    with pytest.raises(ChartMismatch):
        lorentz_dot(MVec3((1, 0, 0), CHART_A1), MVec3((1, 0, 0), CHART_A2))
    with pytest.raises(ChartMismatch):
        lorentz_cross(MVec3((1, 0, 0), CHART_A1), MVec3((1, 0, 0), CHART_A3))
    with pytest.raises(ChartMismatch):
        rotation(AxisKind.A1, 0.3).apply(MVec3((1, 0, 0), CHART_A2))


def test_causal_examples():
    assert causal_character(MVec3((0, 1, 1), CHART_A2)) is CausalCharacter.LIGHT_LIKE
    assert causal_character(MVec3((0, 0, 1), CHART_A2)) is CausalCharacter.TIME_LIKE
    v = MVec3((1, 2, 0), CHART_A3)
    assert lorentz_dot(v, v) == -4
    assert causal_character(v) is CausalCharacter.TIME_LIKE
    with pytest.raises(ValueError):
        causal_character(MVec3((0, 0, 0), CHART_A2))


def test_cross_examples():
    w = lorentz_cross(MVec3((1, 0, 0), CHART_A2), MVec3((0, 1, 0), CHART_A2))
    assert w.coords == (0.0, 0.0, -1.0)
    u = MVec3((0.3, -1.2, 2.0), CHART_A3)
    assert lorentz_cross(u, u).coords == (0.0, 0.0, 0.0)


@given(vec, vec, vec, st.sampled_from([CHART_A1, CHART_A2, CHART_A3]))
def test_cross_determinant_convention(u, v, a, chart):
    U, V, A = MVec3(u, chart), MVec3(v, chart), MVec3(a, chart)
    w = lorentz_cross(U, V)
    det = np.linalg.det(np.array([u, v, a]))
    assert abs(lorentz_dot(w, A) - det) < 1e-9 * (1 + abs(det) + 100)
    assert abs(lorentz_dot(w, U)) < 1e-9 * 100
    assert abs(lorentz_dot(w, V)) < 1e-9 * 100


def test_rotation_examples():
    assert np.array_equal(rotation(AxisKind.A2, 0).matrix, np.eye(3))
    t = 0.7
    out = rotation(AxisKind.A3, t).apply(MVec3((0, 1, 0), CHART_A3))
    assert np.allclose(out.coords, (t * t / 2, 1, t), atol=1e-15)
    out = rotation(AxisKind.A2, math.log(2)).apply(MVec3((0, 1, 0), CHART_A2))
    assert np.allclose(out.coords, (0, 1.25, 0.75), atol=1e-15)


@pytest.mark.parametrize("kind", list(AxisKind))
def test_rotation_is_exponential_of_generator(kind):
    # independent route: matrix exponential of the generator
    for t in (-1.3, 0.2, 2.1):
        assert np.allclose(rotation_matrix(kind, t), expm(t * generator(kind)), atol=1e-12)


@given(kinds, st.floats(-3, 3), st.floats(-3, 3))
def test_isometry_and_group_law(kind, s, t):
    R = rotation(kind, t)
    assert R.is_isometry(1e-12 * max(1.0, math.cosh(t) ** 2, t ** 4))
    lhs = rotation(kind, s + t).matrix
    rhs = (rotation(kind, s) @ rotation(kind, t)).matrix
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(lhs)))


def test_dot_preserved_on_random_samples():
    rng = np.random.default_rng(11)
    for kind in AxisKind:
        G = chart_for(kind).metric
        for _ in range(1000):
            t = rng.uniform(-2, 2)
            R = rotation_matrix(kind, t)
            v, w = rng.normal(size=3), rng.normal(size=3)
            assert abs((R @ v) @ G @ (R @ w) - v @ G @ w) < 1e-12 * max(1.0, np.abs(R).max() ** 2) * 10


def test_region_examples():
    assert fundamental_region(MVec3((5, 0.1, 1), CHART_A2), AxisKind.A2) is RegionLabel.R_PLUS
    assert fundamental_region(MVec3((0, 1, 1), CHART_A2), AxisKind.A2) is RegionLabel.DEGENERATE_PLANE
    assert fundamental_region(MVec3((7, -2, 3), CHART_A3), AxisKind.A3) is RegionLabel.S_MINUS
    assert fundamental_region(MVec3((0, 0, 0), CHART_A2), AxisKind.A2) is RegionLabel.AXIS
    assert fundamental_region(MVec3((1, 0.5, 0), CHART_A1), AxisKind.A1) is RegionLabel.EXTERIOR
    assert fundamental_region(MVec3((0, -2, 1), CHART_A2), AxisKind.A2) is RegionLabel.Q_MINUS


@given(kinds, vec, st.floats(-2, 2))
def test_region_constant_along_orbits(kind, p, t):
    P = MVec3(p, chart_for(kind))
    y, z = p[1], p[2]
    if min(abs(y), abs(z), abs(z * z - y * y)) < 1e-3:
        return
    Q = rotation(kind, t).apply(P)
    assert fundamental_region(Q, kind, 1e-9) is fundamental_region(P, kind, 1e-9)


def test_orbit_examples():
    d = orbit_descriptor(MVec3((2, 0, 0), CHART_A1), AxisKind.A1)
    assert d.kind is OrbitKind.POINT
    d = orbit_descriptor(MVec3((0, 1, 1), CHART_A2), AxisKind.A2)
    assert d.kind is OrbitKind.HALF_LINE and d.contains((0, 3, 3)) and not d.contains((0, -3, -3))
    d = orbit_descriptor(MVec3((0, 0, 2), CHART_A2), AxisKind.A2)
    assert d.kind is OrbitKind.HYPERBOLA_BRANCH and d.invariant == 4 and d.branch == "z>0"
    d = orbit_descriptor(MVec3((1, 2, 0.5), CHART_A3), AxisKind.A3)
    assert d.kind is OrbitKind.PARABOLA
    d = orbit_descriptor(MVec3((1, 0, 0.5), CHART_A3), AxisKind.A3)
    assert d.kind is OrbitKind.LINE


@pytest.mark.parametrize("kind,p", [
    (AxisKind.A1, (1.0, 0.3, -2.0)),
    (AxisKind.A2, (0.5, 0.2, 1.1)),
    (AxisKind.A2, (0.5, -1.5, 0.4)),
    (AxisKind.A2, (0.0, 0.7, -0.7)),
    (AxisKind.A3, (0.4, 1.3, -0.2)),
    (AxisKind.A3, (0.4, 0.0, 0.8)),
])
def test_orbit_contains_rotated_points(kind, p):
    P = MVec3(p, chart_for(kind))
    d = orbit_descriptor(P, kind)
    for t in np.linspace(-1.5, 1.5, 13):
        assert d.contains(rotation(kind, t).apply(P).coords, tol=1e-9)
