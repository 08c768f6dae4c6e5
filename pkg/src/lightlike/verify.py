"""Batch invariant suites behind ``lightlike verify``.

Suites run in a fixed order: frame identities, form identities, the
degenerate-section sweep and the gauge laws.  Form identities are checked in
the unit gauge and in a seeded random scale gauge, since several catalog
surfaces have tau = 0 in the unit gauge.
"""
from dataclasses import dataclass, field

import numpy as np

from . import forms
from . import sections
from .errors import LightlikeError
from .expr import Gauge, SurfaceDef, parse_expr
from .frames import DEFAULT_TOL, frame_at, frame_residuals

IDENTITY_TOL = 1e-9
GAUGE_TOL = 1e-8
MARGIN = 0.01

SUITES = ("frame-identities", "form-identities", "degenerate-sections", "gauge-laws")


@dataclass
class Check:
    suite: str
    invariant: str
    surface: str
    max_residual: float = 0.0
    worst_point: tuple | None = None
    tol: float = IDENTITY_TOL
    error: str | None = None

    @property
    def passed(self):
        return self.error is None and self.max_residual <= self.tol

    def absorb(self, value, point):
        value = float(value)
        if not value <= self.max_residual:  # also catches NaN
            self.max_residual = value if value == value else float("inf")
            self.worst_point = point

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        where = "" if self.worst_point is None else \
            f" at (u, v) = ({self.worst_point[0]:.6g}, {self.worst_point[1]:.6g})"
        detail = self.error or f"max {self.max_residual:.3e} (tol {self.tol:.0e}){where}"
        return f"{status} {self.suite}: {self.invariant} on {self.surface}: {detail}"


@dataclass
class VerifyResult:
    checks: list = field(default_factory=list)
    seed: int = 0

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self):
        return next((c for c in self.checks if not c.passed), None)


def random_points(surface: SurfaceDef, count: int, rng: np.random.Generator):
    (u0, u1), (v0, v1) = surface.u_range, surface.v_range
    du, dv = MARGIN * (u1 - u0), MARGIN * (v1 - v0)
    us = rng.uniform(u0 + du, u1 - du, count)
    vs = rng.uniform(v0 + dv, v1 - dv, count)
    return [(float(a), float(b)) for a, b in zip(us, vs)]


def random_gauge_text(rng: np.random.Generator) -> str:
    """A positive scale exp(a u + b v + c sin(u v)) with coefficients in [-0.5, 0.5]."""
    a, b, c = (float(x) for x in rng.uniform(-0.5, 0.5, 3))
    return f"exp({a!r}*u + {b!r}*v + {c!r}*sin(u*v))"


class _Suite:
    def __init__(self, name, surface, tol=IDENTITY_TOL):
        self.name, self.surface, self.tol = name, surface, tol
        self.checks = {}

    def record(self, residuals, point):
        for key, value in residuals.items():
            chk = self.checks.get(key)
            if chk is None:
                chk = self.checks[key] = Check(self.name, key, self.surface, tol=self.tol)
            chk.absorb(value, point)

    def fail(self, key, message):
        chk = self.checks.setdefault(key, Check(self.name, key, self.surface, tol=self.tol))
        if chk.error is None:
            chk.error = message


def _frame_suite(surface, points, tol):
    suite = _Suite("frame-identities", surface.name)
    for u, v in points:
        try:
            fr = frame_at(surface, u, v, tol)
        except LightlikeError as exc:
            suite.fail("frame_at", f"{type(exc).__name__} at ({u:.6g}, {v:.6g}): {exc}")
            continue
        suite.record(frame_residuals(fr), (u, v))
    return suite


def _form_suite(surface, points, tol, label):
    suite = _Suite("form-identities", label)
    for u, v in points:
        try:
            fr = frame_at(surface, u, v, tol)
            fd = forms.compute_forms(fr)
        except LightlikeError as exc:
            suite.fail("compute_forms", f"{type(exc).__name__} at ({u:.6g}, {v:.6g}): {exc}")
            continue
        res = forms.form_residuals(fr, fd)
        # D_X xi has no N-component
        res["D_xi_no_N"] = max(abs(fd.B_wxi), abs(fd.B_xixi))
        suite.record(res, (u, v))
    return suite


def _section_suite(surface, points, tol):
    suite = _Suite("degenerate-sections", surface.name)
    for u, v in points:
        try:
            fr = frame_at(surface, u, v, tol)
            fd = forms.compute_forms(fr)
        except LightlikeError as exc:
            suite.fail("degenerate_section", f"{type(exc).__name__} at ({u:.6g}, {v:.6g}): {exc}")
            continue
        rep = sections.degenerate_section(fr, fd)
        suite.record({"planarity": rep.planarity_residual,
                      "gamma2 = -tau(xi) xi": rep.gamma2_residual}, (u, v))
    return suite


def _gauge_suite(surface, points, gauges, tol):
    suite = _Suite("gauge-laws", surface.name, tol=GAUGE_TOL)
    for (u, v), g in zip(points, gauges):
        try:
            rep = forms.gauge_transform_check(surface, (u, v), g, tol)
        except LightlikeError as exc:
            suite.fail("gauge_transform_check", f"{type(exc).__name__} at ({u:.6g}, {v:.6g}): {exc}")
            continue
        suite.record(rep.residuals, (u, v))
    return suite


def run_verify(surfaces, seed=0, points=100, gauges=20, tol=DEFAULT_TOL) -> VerifyResult:
    """Run every suite on every surface; checks come back in suite order."""
    rng = np.random.default_rng(seed)
    plan = []
    for s in surfaces:
        pts = random_points(s, points, rng)
        gauge_text = random_gauge_text(rng)
        g_pts = random_points(s, gauges, rng)
        g_exprs = [parse_expr(random_gauge_text(rng)) for _ in range(gauges)]
        plan.append((s, pts, gauge_text, g_pts, g_exprs))

    by_suite = {name: [] for name in SUITES}
    for s, pts, gauge_text, g_pts, g_exprs in plan:
        unit = s.with_gauge(Gauge())
        scaled = s.with_gauge(Gauge.parse("scale:" + gauge_text))
        by_suite["frame-identities"].append(_frame_suite(unit, pts, tol))
        by_suite["form-identities"].append(_form_suite(unit, pts, tol, s.name))
        by_suite["form-identities"].append(
            _form_suite(scaled, pts, tol, f"{s.name} [scale:{gauge_text}]"))
        by_suite["degenerate-sections"].append(_section_suite(unit, pts, tol))
        by_suite["gauge-laws"].append(_gauge_suite(unit, g_pts, g_exprs, tol))

    checks = []
    for name in SUITES:
        for suite in by_suite[name]:
            checks.extend(suite.checks.values())
    return VerifyResult(checks, seed)
