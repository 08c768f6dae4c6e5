"""Normal-section diagnostics.

A degenerate section is the integral curve of the radical field xi and a
non-degenerate one the integral curve of the unit screen field w.  Their
derivatives are nested directional derivatives of the jet frame:
gamma' = X, gamma'' = D_X X, gamma''' = D_X D_X X for X in {xi, w}.
"""
from dataclasses import dataclass, replace

import numpy as np

from .forms import FormData, decompose
from .frames import LightlikeFrame
from .minkowski import cross, mdot, triple_product

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class SectionReport:
    kind: str  # 'degenerate' | 'nondegenerate'
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray
    planarity_residual: float
    # degenerate: |gamma'' + tau(xi) xi| and |gamma''' - (tau^2 - xi(tau)) xi|
    # nondegenerate: |gamma'' - (nabla*_w w + C xi + B N)| in gamma2_residual
    gamma2_residual: float = 0.0
    gamma3_residual: float = 0.0
    collinearity_residual: float = 0.0
    T_ww: np.ndarray | None = None
    alpha: float | None = None
    beta: float | None = None
    t_fit: float | None = None
    kappa_sq: float | None = None
    kappa_sq_identity_residual: float | None = None
    kappa_sq_pure_residual: float | None = None
    dkappa_sq_ds: float | None = None
    vertex_residual: float | None = None
    nablaT_ww: np.ndarray | None = None


def planarity_residual(g1, g2, g3, zero_tol=ZERO_TOL):
    """|det(g1, g2, g3)| over the product of Euclidean lengths; 0 if any vector vanishes."""
    norms = [float(np.linalg.norm(g)) for g in (g1, g2, g3)]
    if min(norms) <= zero_tol * max(1.0, norms[0]):
        return 0.0
    return abs(triple_product(g1, g2, g3)) / (norms[0] * norms[1] * norms[2] + 1e-300)


def _collinearity(a, b, zero_tol=ZERO_TOL):
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na <= zero_tol or nb <= zero_tol:
        return 0.0
    return float(np.linalg.norm(cross(a, b)) / (na * nb))


def degenerate_section(frame: LightlikeFrame, forms: FormData) -> SectionReport:
    """Section along the radical field; always planar for a lightlike surface."""
    xi_j = frame.xi_jet
    g2_j = frame.along_xi(xi_j)
    g1, g2, g3 = frame.xi, g2_j.value, frame.along_xi(g2_j).value
    tau_j = mdot(frame.along_xi(frame.N_jet), xi_j)
    tau = tau_j.value
    xi_tau = frame.along_xi(tau_j).value
    # differentiating gamma'' = -tau xi once more gives (tau^2 - xi(tau)) xi
    expected3 = (tau * tau - xi_tau) * g1
    return SectionReport(
        kind="degenerate",
        gamma1=g1, gamma2=g2, gamma3=g3,
        planarity_residual=planarity_residual(g1, g2, g3),
        gamma2_residual=float(np.linalg.norm(g2 + forms.tau_xi * g1)),
        gamma3_residual=float(np.linalg.norm(g3 - expected3)),
        collinearity_residual=max(_collinearity(g2, g1), _collinearity(g3, g1)),
    )


def _t_field(frame):
    """Jet of the field p -> T(w, w) = C(w, w) xi + B(w, w) N (order 1)."""
    Dww = frame.along_w(frame.w_jet)
    C = mdot(Dww, frame.N_jet)
    B = mdot(Dww, frame.xi_jet)
    return Dww, C * frame.xi_jet + B * frame.N_jet


def nondegenerate_section(frame: LightlikeFrame, forms: FormData) -> SectionReport:
    """Section along the unit screen field."""
    Dww_j, T_j = _t_field(frame)
    g1, g2, g3 = frame.w, Dww_j.value, frame.along_w(Dww_j).value
    T = forms.C_ww * frame.xi + forms.B_ww * frame.N
    rebuilt = forms.nabla_star_ww + T

    a3, _, c3 = decompose(frame, g3)
    alpha, beta = forms.C_ww, forms.B_ww
    den = alpha * alpha + beta * beta
    t_fit = (a3 * alpha + c3 * beta) / den if den > 1e-20 else None
    return SectionReport(
        kind="nondegenerate",
        gamma1=g1, gamma2=g2, gamma3=g3,
        planarity_residual=planarity_residual(g1, g2, g3),
        gamma2_residual=float(np.linalg.norm(g2 - rebuilt)),
        collinearity_residual=_collinearity(g3, g1),
        T_ww=T, alpha=alpha, beta=beta,
        t_fit=None if t_fit is None else float(t_fit),
        nablaT_ww=frame.along_w(T_j).value,
    )


def kappa_and_vertex(frame: LightlikeFrame, forms: FormData, report: SectionReport) -> SectionReport:
    """Add curvature and vertex diagnostics to a non-degenerate section report.

    kappa^2 = <gamma'', gamma''> equals 2 C B + <nabla*_w w, nabla*_w w>; the
    second term vanishes when the screen field is parallel along its section.
    The vertex residual is |<D_w T(w,w), T(w,w)>|.
    """
    if report.kind != "nondegenerate":
        raise ValueError("curvature diagnostics need a non-degenerate section")
    nstar = forms.nabla_star_ww
    k2 = mdot(report.gamma2, report.gamma2)
    cb2 = 2.0 * forms.C_ww * forms.B_ww
    nablaT = report.nablaT_ww
    if nablaT is None:
        nablaT = frame.along_w(_t_field(frame)[1]).value
    return replace(
        report,
        kappa_sq=k2,
        kappa_sq_identity_residual=abs(k2 - (cb2 + mdot(nstar, nstar))),
        kappa_sq_pure_residual=abs(k2 - cb2),
        dkappa_sq_ds=2.0 * mdot(report.gamma3, report.gamma2),
        vertex_residual=abs(mdot(nablaT, report.T_ww)),
        nablaT_ww=nablaT,
    )


def analyze_sections(frame: LightlikeFrame, forms: FormData):
    """Both section reports at one point, curvature fields filled in."""
    deg = degenerate_section(frame, forms)
    nondeg = kappa_and_vertex(frame, forms, nondegenerate_section(frame, forms))
    return deg, nondeg
