"""Induced connection data of a lightlike surface at a point.

The ambient connection of flat Minkowski space is the coordinate derivative,
so every object comes from directional derivatives of the jet-valued frame
fields, read off against the basis {xi, w, N}::

    B(X, Y) = g(D_X Y, xi)         C(X, w) = g(D_X w, N)
    tau(X)  = g(D_X N, xi)         eps(X)  = g(D_X xi, N)
    A_N X   = -(tangent part of D_X N)
    A*_xi X = -(screen part of D_X xi)
"""
from dataclasses import dataclass

import numpy as np

from .errors import NotApplicable, SingularDecomposition
from .expr import Expr, Gauge, SurfaceDef, eval_jet3, parse_expr
from .frames import DEFAULT_TOL, LightlikeFrame, frame_at
from .minkowski import mdot

COND_LIMIT = 1e12
PHI_EPS = 1e-10


@dataclass(frozen=True)
class FormData:
    B_ww: float
    B_wxi: float
    B_xixi: float
    C_ww: float
    C_xiw: float
    tau_w: float
    tau_xi: float
    eps_w: float
    eps_xi: float
    A_xi_star_w: np.ndarray
    A_xi_star_xi: np.ndarray
    A_N_w: np.ndarray
    A_N_xi: np.ndarray
    nabla_star_ww: np.ndarray
    rho: float | None
    phi: float | None
    gauge_scale: float
    # components (xi, w, N) of D_w w, kept for the decomposition check
    Dww: np.ndarray


def decompose(frame: LightlikeFrame, vec):
    """Coefficients (a, b, c) with vec = a xi + b w + c N."""
    M = np.column_stack([frame.xi, frame.w, frame.N])
    if np.linalg.cond(M) > COND_LIMIT:
        raise SingularDecomposition(f"basis condition number exceeds {COND_LIMIT:g}")
    return np.linalg.solve(M, np.asarray(vec, dtype=float))


def compute_forms(frame: LightlikeFrame) -> FormData:
    """Second fundamental forms, shape operators and 1-forms at the frame's point."""
    xi_j, w_j, N_j = frame.xi_jet, frame.w_jet, frame.N_jet
    xi, w, N = frame.xi, frame.w, frame.N

    Dw_w = frame.along_w(w_j).value
    Dw_xi = frame.along_w(xi_j).value
    Dw_N = frame.along_w(N_j).value
    Dxi_w = frame.along_xi(w_j).value
    Dxi_xi = frame.along_xi(xi_j).value
    Dxi_N = frame.along_xi(N_j).value

    tau_w = mdot(Dw_N, xi)
    tau_xi = mdot(Dxi_N, xi)

    a, b, c = decompose(frame, Dw_w)
    _, b_wxi, _ = decompose(frame, Dw_xi)
    _, b_xixi, _ = decompose(frame, Dxi_xi)
    aN_w, bN_w, _ = decompose(frame, Dw_N)
    aN_xi, bN_xi, _ = decompose(frame, Dxi_N)

    A_star_w = -b_wxi * w
    A_star_xi = -b_xixi * w
    A_N_w = -(aN_w * xi + bN_w * w)
    A_N_xi = -(aN_xi * xi + bN_xi * w)

    B_ww = mdot(Dw_w, xi)
    gww = mdot(w, w)
    # phi relates the w-coefficients of the two (screen-valued) shape operators
    phi = None
    if abs(b_wxi) > PHI_EPS:
        phi = float(bN_w / b_wxi)

    return FormData(
        B_ww=B_ww,
        B_wxi=mdot(Dw_xi, xi),
        B_xixi=mdot(Dxi_xi, xi),
        C_ww=mdot(Dw_w, N),
        C_xiw=mdot(Dxi_w, N),
        tau_w=tau_w,
        tau_xi=tau_xi,
        eps_w=mdot(Dw_xi, N),
        eps_xi=mdot(Dxi_xi, N),
        A_xi_star_w=A_star_w,
        A_xi_star_xi=A_star_xi,
        A_N_w=A_N_w,
        A_N_xi=A_N_xi,
        nabla_star_ww=b * w,
        rho=float(B_ww / gww) if gww > 0 else None,
        phi=phi,
        gauge_scale=frame.gauge_scale,
        Dww=np.array([a, b, c]),
    )


def eta(frame: LightlikeFrame, X) -> float:
    """The 1-form X -> g(X, N)."""
    return mdot(X, frame.N)


def form_residuals(frame: LightlikeFrame, forms: FormData) -> dict:
    """Residuals of the structural identities between forms and operators."""
    xi, w, N = frame.xi, frame.w, frame.N
    Dww = frame.along_w(frame.w_jet).value
    rebuilt = forms.nabla_star_ww + forms.C_ww * xi + forms.B_ww * N
    return {
        "B_radical": max(abs(forms.B_wxi), abs(forms.B_xixi)),
        "B_shape_duality": abs(forms.B_ww - mdot(w, forms.A_xi_star_w)),
        "C_shape_duality": abs(forms.C_ww - mdot(w, forms.A_N_w)),
        "A_N_transversal": max(abs(mdot(N, forms.A_N_w)), abs(mdot(N, forms.A_N_xi))),
        "A_star_xi_zero": float(np.linalg.norm(forms.A_xi_star_xi)),
        "A_star_transversal": abs(mdot(forms.A_xi_star_w, N)),
        "eps+tau": max(abs(forms.eps_w + forms.tau_w), abs(forms.eps_xi + forms.tau_xi)),
        "gauss_decomposition": float(np.linalg.norm(Dww - rebuilt)),
    }


@dataclass
class GaugeReport:
    point: tuple[float, float]
    scale: float
    residuals: dict
    unit: FormData
    scaled: FormData

    def ok(self, tol=1e-8):
        return all(r <= tol for r in self.residuals.values())

    @property
    def max_residual(self):
        return max(self.residuals.values())


def _rel(x, y):
    return abs(x - y) / max(1.0, abs(y))


def gauge_transform_check(surface: SurfaceDef, point, s_expr: Expr | str,
                          tol: float = DEFAULT_TOL) -> GaugeReport:
    """Compare forms in the unit gauge against the gauge xi -> s xi.

    Expected laws: B' = s B, C' = C / s, A*' = s A*, A_N' = A_N / s,
    tau'(w) = tau(w) - w(s)/s, phi' = phi / s^2, rho' = s rho, while C B
    and the section curvature kappa^2 are unchanged.
    """
    if isinstance(s_expr, str):
        s_expr = parse_expr(s_expr)
    u, v = point
    unit_frame = frame_at(surface.with_gauge(Gauge()), u, v, tol)
    scaled_frame = frame_at(surface.with_gauge(Gauge("scale", s_expr)), u, v, tol)
    F, G = compute_forms(unit_frame), compute_forms(scaled_frame)
    s_jet = eval_jet3(s_expr, u, v)
    s = s_jet.value
    if not s > 0:
        raise NotApplicable(f"gauge scale must be positive, got {s!r}")
    ws = unit_frame.along_w(s_jet).value

    def vrel(x, y):
        return float(np.linalg.norm(x - y)) / max(1.0, float(np.linalg.norm(y)))

    Dww = unit_frame.along_w(unit_frame.w_jet).value
    Dww_s = scaled_frame.along_w(scaled_frame.w_jet).value
    res = {
        "B": _rel(G.B_ww, s * F.B_ww),
        "C": _rel(G.C_ww, F.C_ww / s),
        "A_xi_star": vrel(G.A_xi_star_w, s * F.A_xi_star_w),
        "A_N": vrel(G.A_N_w, F.A_N_w / s),
        "tau": _rel(G.tau_w, F.tau_w - ws / s),
        "rho": _rel(G.rho, s * F.rho),
        "CB": _rel(G.C_ww * G.B_ww, F.C_ww * F.B_ww),
        "kappa_sq": _rel(mdot(Dww_s, Dww_s), mdot(Dww, Dww)),
    }
    if (F.phi is None) != (G.phi is None):
        res["phi"] = float("inf")
    elif F.phi is not None:
        res["phi"] = _rel(G.phi, F.phi / s**2)
    return GaugeReport(point=(float(u), float(v)), scale=s, residuals=res, unit=F, scaled=G)

