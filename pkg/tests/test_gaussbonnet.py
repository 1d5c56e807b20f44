import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentz_willmore.gaussbonnet import (NullVectorError, Side, TimeOrientation, angle_asymmetry,
                                          area_integral, euler_angle_check, exterior_angles,
                                          gauss_bonnet_residual, geodesic_curvature_integral,
                                          holonomy_angle, hyperbolic_angle, parallel_transport,
                                          perp, polygon, random_polygon, segment, tangent)
from lorentz_willmore.minkowski import CausalCharacter
from lorentz_willmore.patches import cylinder, flat_plane, hyperboloid, saddle, two_sheet_hyperboloid

FLAT = flat_plane()
HYP = hyperboloid()
rapidity = st.floats(-2.5, 2.5)


def boosted(a):
    """Unit future time-like vector of rapidity a on the flat plane dy^2 - dz^2."""
    return tangent(FLAT, (0, 0), (math.sinh(a), math.cosh(a)))


def hyperbola_arc(kind, a=-0.5, b=0.7):
    """Unit-speed Lorentzian circle of radius 1 on the flat plane, for s in [a, b]."""
    L = b - a
    f, g = (np.cosh, np.sinh) if kind == "time" else (np.sinh, np.cosh)

    def pos(t):
        s = a + L * np.asarray(t)
        return np.stack([f(s), g(s)], -1)

    def vel(t):
        s = a + L * np.asarray(t)
        return L * np.stack([g(s), f(s)], -1)

    def acc(t):
        s = a + L * np.asarray(t)
        return L * L * np.stack([f(s), g(s)], -1)

    return Side(pos, vel, acc)


def test_perp_examples():
    u = tangent(FLAT, (0, 0), (0, 1))
    assert u.causal is CausalCharacter.TIME_LIKE
    assert u.time_orientation is TimeOrientation.FUTURE
    p = perp(u)
    assert np.allclose(p.v, (-1, 0))
    assert p.causal is CausalCharacter.SPACE_LIKE
    assert np.allclose(perp(p).v, -u.v)
    with pytest.raises(NullVectorError):
        perp(tangent(FLAT, (0, 0), (1, 1)))


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-0.8, 0.8), st.floats(-3, 3))
@settings(max_examples=100, deadline=None)
def test_perp_properties(x, y, pz, pt):
    v = tangent(HYP, (1.0 + pz, pt), (x, y))
    if abs(v.square) < 1e-3 * (x * x + y * y) or x * x + y * y < 1e-6:
        return
    w = v.unit()
    q = perp(w)
    g = HYP.metric(w.p)
    assert abs(w.v @ g @ q.v) < 1e-10
    assert abs(abs(q.square) - 1) < 1e-10
    assert q.causal is not w.causal


def test_angle_examples():
    u = tangent(FLAT, (0, 0), (0, 1))
    assert hyperbolic_angle(u, u) == 0.0
    # the coordinate orientation dy ^ dz measures the boost from u towards +y as negative
    for a in (0.5, 1.0, 2.0):
        assert abs(hyperbolic_angle(u, boosted(a)) + a) < 1e-12
        assert abs(hyperbolic_angle(boosted(a), u) - a) < 1e-12


@given(rapidity, rapidity, rapidity)
def test_angle_additive(a, b, c):
    u, v, w = boosted(a), boosted(b), boosted(c)
    assert abs(hyperbolic_angle(u, w) - hyperbolic_angle(u, v) - hyperbolic_angle(v, w)) < 1e-9


@given(rapidity, rapidity)
def test_angle_reductions(a, b):
    u, v = boosted(a), boosted(b)
    # past-pointing v is replaced by -v
    assert abs(hyperbolic_angle(u, -v) - hyperbolic_angle(u, v)) < 1e-12
    # a space-like pair has the angle of its perps
    su, sv = perp(u), perp(v)
    assert abs(hyperbolic_angle(su, sv) - hyperbolic_angle(perp(su), perp(sv))) < 1e-12
    assert abs(hyperbolic_angle(su, sv) - hyperbolic_angle(u, v)) < 1e-10


def test_mixed_angle_asymmetry_reported():
    rng = np.random.default_rng(5)
    for _ in range(50):
        u = boosted(rng.uniform(-2, 2))
        v = perp(boosted(rng.uniform(-2, 2)))
        assert math.isfinite(angle_asymmetry(u, v))
        assert abs(angle_asymmetry(u, v)) < 1e-12


def test_riemannian_angle():
    P = two_sheet_hyperboloid()
    p = (0.6, 0.0)
    g = P.metric(np.array(p))
    e1 = np.array([1.0, 0.0]) / math.sqrt(g[0, 0])
    e2 = np.array([0.0, 1.0]) / math.sqrt(g[1, 1])
    v = math.cos(0.4) * e1 + math.sin(0.4) * e2
    assert abs(hyperbolic_angle(tangent(P, p, e1), tangent(P, p, v)) - 0.4) < 1e-12


def test_geodesic_curvature_examples():
    assert geodesic_curvature_integral(FLAT, segment((0, 0), (0.3, 1.0))) == 0.0
    for kind in ("time", "space"):
        # unit Lorentzian circle: |k| = 1 over arclength 1.2
        assert abs(abs(geodesic_curvature_integral(FLAT, hyperbola_arc(kind))) - 1.2) < 1e-12
    # the cylinder is intrinsically flat (-ds^2 + r^2 dt^2): its orbit circles are geodesics,
    # the 1/r curvature being normal curvature
    for r in (0.5, 1.0, 2.0):
        total = geodesic_curvature_integral(cylinder(r), segment((0.3, 0.0), (0.3, 2 * math.pi)))
        assert abs(total) < 1e-12
    with pytest.raises(NullVectorError):
        geodesic_curvature_integral(FLAT, segment((0, 0), (1, 1)))


def test_transport_flat_is_constant():
    _, Z = parallel_transport(FLAT, hyperbola_arc("time"), (0.3, 1.2), steps=200)
    assert np.max(np.abs(Z - Z[0])) < 1e-14


def test_transport_preserves_products():
    side = segment((0.6, 0.1), (1.3, 0.3))
    _, Z1 = parallel_transport(HYP, side, (0.0, 1.0), steps=1000)
    _, Z2 = parallel_transport(HYP, side, (1.0, 0.3), steps=1000)
    P = side.position(np.linspace(0, 1, 1001))
    g = HYP.metric(P)
    prod = np.einsum("ni,nij,nj->n", Z1, g, Z2)
    norm = np.einsum("ni,nij,nj->n", Z1, g, Z1)
    assert np.ptp(prod) < 1e-7 and np.ptp(norm) < 1e-7


@pytest.mark.parametrize("Z0", [(0.0, 1.0), (0.3, 1.2), (-0.4, 0.9)])
def test_euler_relation(Z0):
    for kind in ("time", "space"):
        defect, skipped = euler_angle_check(FLAT, hyperbola_arc(kind), Z0, steps=400)
        assert defect < 1e-5 and skipped == 0
    defect, _ = euler_angle_check(FLAT, segment((0, 0), (0.3, 1)), Z0, steps=400)
    assert defect < 1e-6


def test_euler_relation_curved_surface_converges():
    side = segment((0.6, 0.1), (1.3, 0.3))
    coarse, _ = euler_angle_check(HYP, side, (1.0, 0.0), steps=100)
    fine, _ = euler_angle_check(HYP, side, (1.0, 0.0), steps=200)
    assert fine < 1e-5
    assert fine <= coarse


def test_holonomy_equals_minus_curvature_integral():
    V = [(0.3, 0.1), (1.0, 0.1), (1.0, 0.7), (0.3, 0.7)]
    poly = polygon(HYP, V)
    Z0 = tangent(HYP, V[0], (1.0, 0.0)).unit()
    hol = holonomy_angle(HYP, poly.sides, Z0, steps=400)
    assert abs(hol + area_integral(HYP, V)) < 1e-3


def test_area_of_hyperboloid_rectangle():
    # K = 1, so int K dA is the area; check against a tensor Gauss-Legendre oracle
    V = [(0.3, 0.1), (1.0, 0.1), (1.0, 0.7), (0.3, 0.7)]
    x, w = np.polynomial.legendre.leggauss(40)
    s = 0.65 + 0.35 * x
    t = 0.4 + 0.3 * x
    S, T = np.meshgrid(s, t, indexing="ij")
    dA = HYP.area_element(np.stack([S, T], -1))
    oracle = float(np.einsum("i,j,ij->", w * 0.35, w * 0.3, dA))
    assert abs(area_integral(HYP, V, level=32) - oracle) < 1e-10


def test_flat_rectangle():
    rep = gauss_bonnet_residual(polygon(FLAT, [(0, 0), (1, 0), (1, 0.5), (0, 0.5)]))
    assert rep.intK == 0.0 and rep.intKappa == 0.0
    assert abs(rep.residual) < 1e-8
    assert rep.lorentzian


def test_hyperboloid_quadrilateral():
    rep = gauss_bonnet_residual(polygon(HYP, [(0.3, 0.1), (1.0, 0.1), (1.0, 0.7), (0.3, 0.7)]), h=0.02)
    assert abs(rep.residual) < 1e-3
    assert rep.intK > 0


def test_riemannian_gauss_bonnet():
    P = two_sheet_hyperboloid()
    rep = gauss_bonnet_residual(polygon(P, [(0.3, 0.0), (1.2, 0.0), (1.2, 0.8), (0.3, 0.8)]), h=0.02)
    assert not rep.lorentzian
    assert abs(rep.residual) < 1e-6


def test_degenerate_side_matches_triangle():
    tri = [(0.8, 0.3), (1.3, 0.35), (1.2, 0.9)]
    quad = [(0.8, 0.3), (1.3, 0.35), (1.3 - 1e-9, 0.35 + 1e-8), (1.2, 0.9)]
    a = gauss_bonnet_residual(polygon(HYP, tri), h=0.02)
    b = gauss_bonnet_residual(polygon(HYP, quad), h=0.02)
    assert abs(a.residual - b.residual) < 1e-6
    assert abs(a.intK - b.intK) < 1e-6


def test_exterior_angles_sum_on_flat_triangle():
    poly = polygon(FLAT, [(0, 0), (1, 0.2), (0.25, 0.9)])
    assert abs(sum(exterior_angles(poly))) < 1e-12


@pytest.mark.parametrize("patch,center,radius", [(FLAT, (0.0, 0.0), 1.0),
                                                 (HYP, (1.0, 0.5), 0.6),
                                                 (saddle(), (0.0, 0.0), 0.3)])
def test_random_polygons(patch, center, radius):
    rng = np.random.default_rng(2024)
    for _ in range(20):
        poly = random_polygon(patch, rng, center, radius)
        coarse = gauss_bonnet_residual(poly, h=0.08).residual
        fine = gauss_bonnet_residual(poly, h=0.04).residual
        assert abs(fine) < 1e-3
        assert abs(fine) <= max(abs(coarse) / 2, 1e-12)
