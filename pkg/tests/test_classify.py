import dataclasses

import pytest

from lightlike.catalog import BUILTINS, builtin, random_null_ruled, random_null_ruled_family
from lightlike.classify import (Tolerances, classify_surface, in_vertex_class, planarity_harness,
                                sample_grid, vertex_harness, vertex_search)
from lightlike.errors import GridFailure, NotApplicable
from lightlike.expr import SurfaceDef, parse_expr

CONE = builtin("null-cone").surface
RULED = random_null_ruled_family(5, 5)
VERDICTS = ("totally_geodesic", "totally_umbilical", "screen_conformal",
            "planar_nondegenerate", "planar_degenerate")


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_catalog_verdicts(name):
    entry = builtin(name)
    c = classify_surface(entry.surface, (10, 10))
    for key, expected in entry.expected.items():
        assert getattr(c, key) == expected, (key, c)
    assert c.characterization_consistent and c.characterization_holds()
    assert c.planar_degenerate
    assert not c.errors


def test_cone_classification_values():
    c = classify_surface(CONE, (6, 6))
    assert c.max_B == pytest.approx(1 / 0.515, rel=1e-6)
    assert all(p == pytest.approx(0.5) for p in c.phi)
    assert c.max_umbilical_residual <= 1e-14
    assert c.grid == {"n_u": 6, "n_v": 6, "margin": 0.01, "order": "row-major"}
    assert c.tolerances["planar"] == Tolerances().planar


@pytest.mark.parametrize("surface", RULED, ids=lambda s: s.name)
def test_ruled_surfaces_are_consistent_and_nonplanar(surface):
    c = classify_surface(surface, (8, 8))
    assert c.totally_umbilical
    assert not c.totally_geodesic and not c.planar_nondegenerate
    assert not c.screen_conformal
    assert c.planar_degenerate
    assert c.characterization_consistent


@pytest.mark.parametrize("surface", [CONE, builtin("null-cylinder").surface] + RULED[:2],
                         ids=lambda s: s.name)
def test_verdicts_do_not_depend_on_gauge(surface):
    base = classify_surface(surface, (6, 6))
    for g in ["u", "exp(0.5*u - 0.5*v)", "2 + sin(v)", "1 + u^2", "exp(0.3*sin(u*v))"]:
        c = classify_surface(surface.with_gauge("scale:" + g), (6, 6))
        for key in VERDICTS:
            assert getattr(c, key) == getattr(base, key), (g, key)


@pytest.mark.parametrize("surface", [CONE, builtin("null-plane").surface] + RULED[:2],
                         ids=lambda s: s.name)
def test_loosening_tolerances_only_adds_properties(surface):
    strict = classify_surface(surface, (6, 6))
    loose = classify_surface(surface, (6, 6), Tolerances().loosened(10))
    for key in VERDICTS:
        assert getattr(loose, key) or not getattr(strict, key), key


def test_error_fraction_threshold():
    # the cone through its apex: u = 0 has a vanishing metric
    apex = SurfaceDef("cone-through-apex", parse_expr("u"), parse_expr("u*cos(v)"), parse_expr("u*sin(v)"),
                      (-1.0, 1.0), (0.0, 1.0))
    samples, errors = sample_grid(apex, (101, 2))
    assert len(errors) == 2 and {e["error"] for e in errors} == {"RankZero"}
    assert len(samples) == 200
    with pytest.raises(GridFailure) as info:
        sample_grid(apex, (11, 2))
    assert len(info.value.errors) == 2


def test_small_grid_rejected():
    with pytest.raises(ValueError):
        classify_surface(CONE, (1, 5))


def test_timelike_surface_is_a_grid_failure_entry():
    plane = SurfaceDef("timelike-plane", parse_expr("u"), parse_expr("v"), parse_expr("0"),
                       (0.0, 1.0), (0.0, 1.0))
    report = planarity_harness([CONE, plane], (4, 4))
    assert [e.status for e in report.entries] == ["consistent", "grid-failure"]
    assert "NotLightlike" in report.entries[1].message
    assert report.consistent and len(report.failures) == 1


def test_harness_on_catalog_and_random_surfaces():
    surfaces = [builtin(n).surface for n in sorted(BUILTINS)] + random_null_ruled_family(7, 10)
    report = planarity_harness(surfaces, (6, 6), seed=7)
    assert report.consistent and not report.failures
    assert len(report.entries) == 14


def test_corrupted_classifier_is_caught():
    def flipped(surface, grid, tols):
        c = classify_surface(surface, grid, tols)
        return dataclasses.replace(c, screen_conformal=not c.screen_conformal)

    report = planarity_harness([CONE], (4, 4), classifier=flipped)
    assert len(report.counterexamples) == 1
    assert "conformal=False" in report.counterexamples[0].message


def test_harness_needs_surfaces():
    with pytest.raises(ValueError):
        planarity_harness([])


@pytest.mark.parametrize("surface", [CONE, builtin("null-cylinder").surface, random_null_ruled(1)],
                         ids=lambda s: s.name)
def test_vertex_harness_outside_hypothesis_class(surface):
    assert not in_vertex_class(classify_surface(surface, (5, 5)))
    with pytest.raises(NotApplicable):
        vertex_harness(surface, (5, 5))


def test_vertex_search_finds_no_instance():
    search = vertex_search([CONE, builtin("null-plane").surface], (4, 4), seed=3, random=4)
    assert search.tried == 6 and search.empty
    assert len(search.not_applicable) == 6


def test_vertex_evaluation_with_overridden_classification():
    # forcing the cone into the class: D_w T = -w/u^2 never vanishes, yet the
    # section is planar with a vertex, so the equivalence fails at every sample
    c = classify_surface(CONE, (4, 4))
    forced = dataclasses.replace(c, totally_umbilical=False)
    report = vertex_harness(CONE, (4, 4), classification=forced)
    assert not report.holds
    assert all(s.nabla_t > 0.1 and s.vertex <= 1e-12 for s in report.samples)
