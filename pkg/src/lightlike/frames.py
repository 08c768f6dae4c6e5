"""Lightlike frames: radical field xi, screen field w and null transversal N.

Every field is built in jet arithmetic from the third-order jet of the
parametrization, so each one comes out as a second-order jet and can be
differentiated along the surface.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotLightlike, RankZero
from .expr import SurfaceDef, eval_jet3
from .jets import Jet3, directional_derivative, jet_compose, jet_const, stack
from .minkowski import mdot, transversal

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class InducedMetric:
    g_uu: float
    g_uv: float
    g_vv: float
    scale: float  # max of |g_ij| and the squared Euclidean lengths of f_u, f_v

    @property
    def det(self):
        return self.g_uu * self.g_vv - self.g_uv ** 2

    def matrix(self):
        return np.array([[self.g_uu, self.g_uv], [self.g_uv, self.g_vv]])


@dataclass(frozen=True, eq=False)
class LightlikeFrame:
    u: float
    v: float
    point: np.ndarray
    xi: np.ndarray
    w: np.ndarray
    N: np.ndarray
    xi_param: tuple[float, float]
    w_param: tuple[float, float]
    gauge_scale: float
    metric: InducedMetric
    # jet-valued copies: f has order 3, the frame fields order 2
    f_jet: Jet3
    xi_jet: Jet3
    w_jet: Jet3
    N_jet: Jet3
    xi_param_jet: tuple[Jet3, Jet3]
    w_param_jet: tuple[Jet3, Jet3]
    scale_jet: Jet3

    def along_xi(self, field):
        """Directional derivative D_xi of a jet field."""
        return directional_derivative(field, self.xi_param_jet)

    def along_w(self, field):
        """Directional derivative D_w of a jet field."""
        return directional_derivative(field, self.w_param_jet)

    def tangent(self, a, b):
        """Ambient vector of the parameter-space vector (a, b)."""
        fu = self.f_jet.d_u().value
        fv = self.f_jet.d_v().value
        return a * fu + b * fv


def _metric_jets(f):
    fu, fv = f.d_u(), f.d_v()
    return fu, fv, mdot(fu, fu), mdot(fu, fv), mdot(fv, fv)


def _metric_from(fu, fv, guu, guv, gvv):
    fu0, fv0 = fu.value, fv.value
    scale = max(abs(guu.value), abs(guv.value), abs(gvv.value),
                float(fu0 @ fu0), float(fv0 @ fv0))
    return InducedMetric(guu.value, guv.value, gvv.value, scale)


def induced_metric(surface: SurfaceDef, u: float, v: float) -> InducedMetric:
    f = stack(surface.jets(u, v))
    return _metric_from(*_metric_jets(f))


def frame_at(surface: SurfaceDef, u: float, v: float, tol: float = DEFAULT_TOL) -> LightlikeFrame:
    """Build the lightlike frame at chart point ``(u, v)``.

    The radical direction spans ker g with unit parameter norm (first nonzero
    parameter component positive), times the gauge scale.  The screen vector
    is the g-unit vector along whichever parameter direction has the larger
    g-norm.  N is the null transversal paired to both.
    """
    f = stack(surface.jets(u, v))
    fu, fv, guu, guv, gvv = _metric_jets(f)
    metric = _metric_from(fu, fv, guu, guv, gvv)
    s2 = metric.scale ** 2
    if abs(metric.det) > tol * s2:
        raise NotLightlike(metric.det, u, v)
    if max(abs(metric.g_uu), abs(metric.g_uv), abs(metric.g_vv)) <= tol * metric.scale:
        raise RankZero(f"induced metric vanishes at ({u}, {v})")

    # kernel of a rank-1 symmetric 2x2 matrix: orthogonal to its larger row
    k1 = (-guv, guu)
    k2 = (gvv, -guv)
    n1 = np.hypot(k1[0].value, k1[1].value)
    n2 = np.hypot(k2[0].value, k2[1].value)
    ku, kv = k1 if n1 >= n2 else k2
    norm = jet_compose("sqrt", ku * ku + kv * kv)
    xu, xv = ku / norm, kv / norm
    lead = xu.value if abs(xu.value) > 1e-9 else xv.value
    if lead < 0:
        xu, xv = -xu, -xv

    if surface.gauge.kind == "scale":
        s = eval_jet3(surface.gauge.expr, u, v)
        if not s.value > 0:
            raise DomainError(f"gauge scale must be positive, got {s.value!r} at ({u}, {v})")
        xu, xv = s * xu, s * xv
    else:
        s = jet_const(1.0)

    xi = xu * fu + xv * fv

    zero = 0.0 * guu
    if gvv.value >= guu.value:
        a = 1.0 / jet_compose("sqrt", gvv)
        wu, wv = zero, a
        w = a * fv
    else:
        a = 1.0 / jet_compose("sqrt", guu)
        wu, wv = a, zero
        w = a * fu

    N = transversal(xi, w)
    return LightlikeFrame(
        u=float(u), v=float(v),
        point=f.value, xi=xi.value, w=w.value, N=N.value,
        xi_param=(xu.value, xv.value), w_param=(wu.value, wv.value),
        gauge_scale=s.value, metric=metric,
        f_jet=f, xi_jet=xi, w_jet=w, N_jet=N,
        xi_param_jet=(xu, xv), w_param_jet=(wu, wv), scale_jet=s,
    )


def frame_residuals(frame: LightlikeFrame) -> dict:
    """Residuals of the frame identities, keyed by a short name."""
    xi, w, N = frame.xi, frame.w, frame.N
    res = {
        "xi_null": abs(mdot(xi, xi)),
        "xi_w_orthogonal": abs(mdot(xi, w)),
        "N_null": abs(mdot(N, N)),
        "N_xi_pairing": abs(mdot(N, xi) - 1.0),
        "N_w_orthogonal": abs(mdot(N, w)),
        "xi_tangent": float(np.linalg.norm(xi - frame.tangent(*frame.xi_param))),
        "w_tangent": float(np.linalg.norm(w - frame.tangent(*frame.w_param))),
        "w_unit": abs(mdot(w, w) - 1.0),
    }
    # radical: xi is g-orthogonal to the whole tangent plane
    fu = frame.f_jet.d_u().value
    fv = frame.f_jet.d_v().value
    res["xi_radical"] = max(abs(mdot(xi, fu)), abs(mdot(xi, fv)))
    return res


def frame_grid(surface: SurfaceDef, n_u: int, n_v: int, margin: float = 0.01):
    """Row-major interior sample points of the chart box."""
    (u0, u1), (v0, v1) = surface.u_range, surface.v_range
    du, dv = margin * (u1 - u0), margin * (v1 - v0)
    us = np.linspace(u0 + du, u1 - du, n_u)
    vs = np.linspace(v0 + dv, v1 - dv, n_v)
    return [(float(a), float(b)) for a in us for b in vs]
