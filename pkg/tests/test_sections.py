import numpy as np
import pytest

from lightlike.catalog import builtin, builtin_surfaces, random_null_ruled
from lightlike.forms import compute_forms
from lightlike.frames import frame_at
from lightlike.minkowski import mdot
from lightlike.sections import (analyze_sections, degenerate_section, kappa_and_vertex,
                                nondegenerate_section, planarity_residual)
from oracles import cone_section, integral_curve_derivatives

CONE = builtin("null-cone").surface
RULED = [random_null_ruled(k) for k in range(1, 6)]


def _sections(surface, u, v):
    fr = frame_at(surface, u, v)
    f = compute_forms(fr)
    return fr, f, analyze_sections(fr, f)


def test_planarity_residual_examples():
    assert planarity_residual((1, 0, 0), (0, 1, 0), (0, 0, 1)) == pytest.approx(1.0)
    assert planarity_residual((1, 0, 0), (0, 1, 0), (1, 1, 0)) == 0.0
    # a vanishing vector counts as planar
    assert planarity_residual((1, 0, 0), (0, 0, 0), (0, 0, 1)) == 0.0
    assert planarity_residual((1, 2, 3), (4, 5, 6), (7, 8, 10)) > 0


def test_cone_nondegenerate_section_at_unit_point():
    _, _, (_, nd) = _sections(CONE, 1.0, 0.0)
    np.testing.assert_allclose(nd.gamma1, (0, 0, 1), atol=1e-14)
    np.testing.assert_allclose(nd.gamma2, (0, -1, 0), atol=1e-14)
    np.testing.assert_allclose(nd.gamma3, (0, 0, -1), atol=1e-14)
    assert nd.planarity_residual <= 1e-14
    assert nd.kappa_sq == pytest.approx(1.0)
    assert nd.vertex_residual <= 1e-14


def test_cone_sections_match_closed_forms():
    rng = np.random.default_rng(4)
    for u, v in rng.uniform((0.5, 0.0), (2.0, 6.28), (40, 2)):
        _, f, (deg, nd) = _sections(CONE, u, v)
        for got, want in zip((nd.gamma1, nd.gamma2, nd.gamma3), cone_section(u, v)):
            np.testing.assert_allclose(got, want, atol=1e-12)
        assert nd.planarity_residual <= 1e-12
        assert nd.collinearity_residual <= 1e-12
        assert nd.kappa_sq == pytest.approx(1 / u ** 2, rel=1e-12)
        assert nd.kappa_sq_pure_residual <= 1e-12
        assert nd.vertex_residual <= 1e-12
        # the radical section is a straight ruling through the apex
        np.testing.assert_allclose(deg.gamma2, 0, atol=1e-13)
        np.testing.assert_allclose(deg.gamma3, 0, atol=1e-13)


def test_radical_section_in_position_gauge():
    scaled = CONE.with_gauge("scale:u")
    for u, v in [(1.0, 0.0), (1.7, 2.0)]:
        fr, f, (deg, _) = _sections(scaled, u, v)
        np.testing.assert_allclose(deg.gamma1, fr.point, atol=1e-13)
        np.testing.assert_allclose(deg.gamma2, fr.point, atol=1e-13)
        np.testing.assert_allclose(deg.gamma3, fr.point, atol=1e-13)
        assert f.tau_xi == pytest.approx(-1.0)
        assert deg.gamma2_residual <= 1e-13 and deg.gamma3_residual <= 1e-13
        assert deg.planarity_residual <= 1e-15


@pytest.mark.parametrize("surface", builtin_surfaces() + RULED, ids=lambda s: s.name)
def test_section_identities_at_random_points(surface):
    rng = np.random.default_rng(14)
    (u0, u1), (v0, v1) = surface.u_range, surface.v_range
    for _ in range(30):
        fr, f, (deg, nd) = _sections(surface, rng.uniform(u0, u1), rng.uniform(v0, v1))
        assert deg.planarity_residual <= 1e-9
        assert deg.gamma2_residual <= 1e-9 and deg.gamma3_residual <= 1e-9
        assert nd.gamma2_residual <= 1e-9
        assert nd.kappa_sq_identity_residual <= 1e-8
        # kappa^2 is the Minkowski square of gamma''
        assert nd.kappa_sq == pytest.approx(mdot(nd.gamma2, nd.gamma2))


@pytest.mark.parametrize("surface", RULED, ids=lambda s: s.name)
def test_ruled_surfaces_have_nonplanar_screen_sections(surface):
    rng = np.random.default_rng(15)
    (u0, u1), (v0, v1) = surface.u_range, surface.v_range
    worst = max(_sections(surface, rng.uniform(u0, u1), rng.uniform(v0, v1))[2][1].planarity_residual
                for _ in range(20))
    assert worst > 1e-6


@pytest.mark.parametrize("surface", [CONE] + RULED[:3], ids=lambda s: s.name)
@pytest.mark.parametrize("field", ["w", "xi"])
def test_sections_match_integrated_curves(surface, field):
    rng = np.random.default_rng(16)
    (u0, u1), (v0, v1) = surface.u_range, surface.v_range
    for _ in range(3):
        u = rng.uniform(u0 + 0.1 * (u1 - u0), u1 - 0.1 * (u1 - u0))
        v = rng.uniform(v0 + 0.1 * (v1 - v0), v1 - 0.1 * (v1 - v0))
        _, _, (deg, nd) = _sections(surface, u, v)
        rep = nd if field == "w" else deg
        d1, d2, d3 = integral_curve_derivatives(surface, u, v, field)
        for got, want, tol in [(rep.gamma1, d1, 1e-9), (rep.gamma2, d2, 1e-6), (rep.gamma3, d3, 1e-5)]:
            scale = max(1.0, float(np.linalg.norm(got)))
            assert np.linalg.norm(got - want) <= tol * scale


def test_section_quantities_are_gauge_independent():
    gauges = ["u", "exp(0.4*u - 0.3*v)", "2 + sin(u*v)"]
    for surface in [CONE] + RULED[:2]:
        u = 0.5 * sum(surface.u_range)
        v = 0.3 * surface.v_range[0] + 0.7 * surface.v_range[1]
        _, _, (deg0, nd0) = _sections(surface, u, v)
        for g in gauges:
            _, _, (deg, nd) = _sections(surface.with_gauge("scale:" + g), u, v)
            assert nd.planarity_residual == pytest.approx(nd0.planarity_residual, rel=1e-8, abs=1e-12)
            assert nd.kappa_sq == pytest.approx(nd0.kappa_sq, rel=1e-9, abs=1e-12)
            assert nd.vertex_residual == pytest.approx(nd0.vertex_residual, rel=1e-8, abs=1e-12)
            np.testing.assert_allclose(nd.T_ww, nd0.T_ww, rtol=1e-9, atol=1e-12)
            assert deg.planarity_residual <= 1e-9


def test_curvature_diagnostics_reject_radical_section():
    fr = frame_at(CONE, 1.0, 0.0)
    f = compute_forms(fr)
    with pytest.raises(ValueError):
        kappa_and_vertex(fr, f, degenerate_section(fr, f))


def test_nondegenerate_report_fills_fit_coefficients():
    fr = frame_at(CONE, 1.0, 0.0)
    f = compute_forms(fr)
    nd = nondegenerate_section(fr, f)
    assert nd.alpha == pytest.approx(-0.5) and nd.beta == pytest.approx(-1.0)
    np.testing.assert_allclose(nd.T_ww, nd.gamma2, atol=1e-14)
    assert nd.t_fit is not None


def test_plane_intersection_differs_from_screen_section_off_the_tangent():
    # cone cut by the plane x0 + x1 = 2 through (1, 1, 0); the curve is
    # c(a) = (1 + a^2/4, 1 - a^2/4, a) and shares its tangent with the w-section
    fr = frame_at(CONE, 1.0, 0.0)
    f = compute_forms(fr)
    nd = nondegenerate_section(fr, f)
    c1, c2 = np.array([0.0, 0.0, 1.0]), np.array([0.5, -0.5, 0.0])
    a = 0.3
    assert mdot((1 + a * a / 4, 1 - a * a / 4, a), (1 + a * a / 4, 1 - a * a / 4, a)) == pytest.approx(0.0)
    np.testing.assert_allclose(nd.gamma1, c1, atol=1e-14)
    # same transversal (N) component: g(., xi) = B
    assert mdot(c2, fr.xi) == pytest.approx(f.B_ww)
    assert mdot(nd.gamma2, fr.xi) == pytest.approx(f.B_ww)
    # radical components differ: the plane curve has none, the section has C
    assert mdot(c2, fr.N) == pytest.approx(0.0, abs=1e-15)
    assert mdot(nd.gamma2, fr.N) == pytest.approx(f.C_ww)
