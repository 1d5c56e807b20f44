import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentz_willmore.gluing import (GluingError, SolutionKind, admissible_delta,
                                     build_glued_surface, check_glued_surface, check_local_gluing,
                                     classify_glued_solution, gluing_function, seed_from_expression,
                                     seed_from_samples)


def test_saddle_is_exact():
    g = build_glued_surface(seed_from_expression("-u"))
    P = g.vertices()
    assert np.max(np.abs(P[:, 0] - (P[:, 1] ** 2 - P[:, 2] ** 2))) < 1e-12
    F = gluing_function(g.seed)
    y, z = np.meshgrid(np.linspace(-0.3, 0.3, 31), np.linspace(-0.3, 0.3, 31))
    assert np.all(F(y, z) == y * y - z * z)
    assert set(g.surfaces) == {"R+", "R-", "Q+", "Q-"}


def test_hyperboloid_pointwise():
    g = build_glued_surface(seed_from_expression("sqrt(1+u)", 0.9))
    P = g.vertices()
    assert np.max(np.abs(P[:, 0] ** 2 + P[:, 1] ** 2 - P[:, 2] ** 2 - 1)) < 1e-12
    assert g.patch.point == (1.0, 0.0, 0.0)


def test_constant_seed_gives_plane():
    g = build_glued_surface(seed_from_expression("1.5"))
    assert np.all(g.vertices()[:, 0] == 1.5)
    c = classify_glued_solution(g)
    assert c.kind is SolutionKind.PLANE and c.center == (1.5, 0.0, 0.0)


def test_gluing_function_values():
    F = gluing_function(seed_from_expression("-u", 2.0))
    assert F(1.0, 2.0) == -3.0  # y^2 - z^2
    F = gluing_function(seed_from_expression("sqrt(1+u)", 0.9))
    assert abs(F(0.3, 0.4) - 1.03440804327886) < 1e-12
    for y in (0.0, 0.2, -0.5):
        assert F(y, y) == 1.0 and F(y, -y) == 1.0
    with pytest.raises(GluingError):
        F(0.0, 0.95)


@given(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6), st.sampled_from(["sqrt(1+u)", "-u", "u+u^2", "2-3*u^2"]))
@settings(max_examples=200)
def test_round_trip_branches(y, z, text):
    seed = seed_from_expression(text, 0.9)
    F = gluing_function(seed)
    if abs(z * z - y * y) >= 0.81:
        return
    v = F(y, z)
    if z * z >= y * y:
        other = seed.f_alpha(math.copysign(math.sqrt(z * z - y * y), z))
    else:
        other = seed.f_beta(math.copysign(math.sqrt(y * y - z * z), y))
    assert abs(v - other) < 1e-12


def test_automatic_delta_keeps_profile_timelike():
    seed = seed_from_expression("-u")
    assert seed.delta == pytest.approx(0.9 ** 7)
    assert seed.timelike_margin() < 1.0
    assert admissible_delta(seed) == seed.delta


def test_not_timelike_is_rejected():
    with pytest.raises(GluingError, match="time-like"):
        build_glued_surface(seed_from_expression("-u", 0.9))


def test_sampled_seed_matches_closed_form():
    u = np.linspace(-0.85, 0.85, 401)
    seed = seed_from_samples(u, np.sqrt(1 + u), delta=0.9)
    g = build_glued_surface(seed, s_range=(0.1, 0.8))
    P = g.vertices()
    assert np.max(np.abs(P[:, 0] ** 2 + P[:, 1] ** 2 - P[:, 2] ** 2 - 1)) < 1e-8
    assert classify_glued_solution(g).kind is SolutionKind.HYPERBOLOID


def test_local_gluing_examples():
    rep = check_local_gluing(lambda s: -np.asarray(s) ** 2, lambda s: np.asarray(s) ** 2)
    assert rep.passed and rep.lg3_max_jump < 1e-10
    rep = check_local_gluing(lambda s: np.asarray(s, dtype=float), lambda s: np.asarray(s) ** 2)
    assert not rep.passed and not rep.lg1
    assert any("perpendicular" in d for d in rep.diagnostics)
    rep = check_local_gluing(lambda s: np.asarray(s) ** 2, lambda s: 2 * np.asarray(s) ** 2, order=1)
    assert not rep.passed and rep.lg3_max_jump > 0.1
    rep = check_local_gluing(lambda s: 1 + np.asarray(s) ** 2, lambda s: np.asarray(s) ** 2)
    assert not rep.passed and not rep.lg2


@pytest.mark.parametrize("text", ["sqrt(1+u)", "-u", "1.5", "u+u^2", "sqrt(4+u)", "1/(2-u)"])
def test_built_surfaces_pass_local_gluing(text):
    g = build_glued_surface(seed_from_expression(text))
    rep = check_glued_surface(g, order=3, tol=1e-8)
    assert rep.passed, rep.diagnostics
    assert rep.lorentzian_along_patch


@pytest.mark.parametrize("text,kind,radius", [
    ("sqrt(1+u)", SolutionKind.HYPERBOLOID, 1.0),
    ("sqrt(4+u)", SolutionKind.HYPERBOLOID, 2.0),
    ("0.5+sqrt(1+u)", SolutionKind.HYPERBOLOID, 1.0),
    ("1.5", SolutionKind.PLANE, None),
    ("-u", SolutionKind.NONE, None),
    ("u+u^2", SolutionKind.NONE, None),
])
def test_classification_and_residual_agree(text, kind, radius):
    g = build_glued_surface(seed_from_expression(text))
    c = classify_glued_solution(g)
    assert c.kind is kind
    if radius is not None:
        assert abs(c.radius - radius) < 1e-9
    # a solution label exactly when the Willmore residual vanishes
    assert (c.residual_max < 5e-4) == (kind is not SolutionKind.NONE)
    if text == "0.5+sqrt(1+u)":
        assert abs(c.center[0] - 0.5) < 1e-9


def test_saddle_residual_on_unit_patch():
    g = build_glued_surface(seed_from_expression("-u"))
    assert g.residual_max() > 0.01
