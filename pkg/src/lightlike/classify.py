"""Grid classification of lightlike surfaces and the two theorem harnesses.

``planarity_harness`` checks, surface by surface, that non-degenerate planar
normal sections occur exactly for surfaces that are totally geodesic or both
totally umbilical and screen conformal.  ``vertex_harness`` checks, for
screen-conformal non-umbilical surfaces, that (D_w T)(w, w) = 0 holds exactly
where the section is planar with a vertex at the point.
"""
from dataclasses import asdict, dataclass, field

import numpy as np

from . import forms as _forms
from .catalog import random_null_ruled_family
from .errors import GridFailure, LightlikeError, NotApplicable
from .expr import SurfaceDef
from .frames import DEFAULT_TOL, frame_at, frame_grid
from .minkowski import mdot
from .sections import analyze_sections


@dataclass(frozen=True)
class Tolerances:
    degenerate: float = DEFAULT_TOL  # |det g| relative threshold of the lightlike test
    planar: float = 1e-7             # max normalized triple product
    geodesic: float = 1e-8           # |B|
    umbilical: float = 1e-8          # |B(w,w) - rho g(w,w)|
    conformal: float = 1e-8          # |A_N w - phi A* w| and |C(xi, w)|
    vanish: float = 1e-10            # shape operator counted as zero
    vertex: float = 1e-8             # |<D_w T, T>|
    nabla_t: float = 1e-8            # |(D_w T)(w, w)|
    max_error_fraction: float = 0.01

    def loosened(self, factor):
        return Tolerances(**{k: (v * factor if k != "max_error_fraction" else v)
                             for k, v in asdict(self).items()})


@dataclass
class Sample:
    u: float
    v: float
    frame: object
    forms: object
    degenerate: object
    nondegenerate: object


def analyze_point(surface: SurfaceDef, u: float, v: float, tols: Tolerances = Tolerances()) -> Sample:
    fr = frame_at(surface, u, v, tols.degenerate)
    fd = _forms.compute_forms(fr)
    deg, nondeg = analyze_sections(fr, fd)
    return Sample(u, v, fr, fd, deg, nondeg)


def sample_grid(surface, grid, tols=Tolerances()):
    """Analyze every interior grid point; returns (samples, errors)."""
    n_u, n_v = grid
    if n_u < 2 or n_v < 2:
        raise ValueError("grid needs at least 2 points per direction")
    points = frame_grid(surface, n_u, n_v)
    samples, errors = [], []
    for u, v in points:
        try:
            samples.append(analyze_point(surface, u, v, tols))
        except LightlikeError as exc:
            errors.append({"u": u, "v": v, "error": type(exc).__name__, "message": str(exc)})
    if len(errors) > tols.max_error_fraction * len(points):
        kinds = sorted({e["error"] for e in errors})
        raise GridFailure(
            f"{len(errors)} of {len(points)} samples failed ({', '.join(kinds)})", errors)
    return samples, errors


@dataclass
class Classification:
    surface: str
    totally_geodesic: bool
    max_B: float
    totally_umbilical: bool
    max_umbilical_residual: float
    rho: list
    screen_conformal: bool
    max_conformal_residual: float
    max_C_xi: float
    phi: list
    planar_nondegenerate: bool
    max_planarity_nondegenerate: float
    planar_degenerate: bool
    max_planarity_degenerate: float
    characterization_consistent: bool
    grid: dict
    tolerances: dict
    errors: list = field(default_factory=list)

    def characterization_holds(self):
        """Recompute the biconditional from the verdict flags."""
        rhs = (self.totally_umbilical and self.screen_conformal) or self.totally_geodesic
        return self.planar_nondegenerate == rhs


def _conformal_residual(fd, tols):
    """Residual of A_N = phi A*_xi at one sample (0 when both operators vanish on w)."""
    n_star = float(np.linalg.norm(fd.A_xi_star_w))
    n_N = float(np.linalg.norm(fd.A_N_w))
    if n_star <= tols.vanish and n_N <= tols.vanish:
        return 0.0
    if fd.phi is None:
        return float("inf")
    return float(np.linalg.norm(fd.A_N_w - fd.phi * fd.A_xi_star_w))


def classify_samples(name, samples, grid, tols, errors=()):
    max_B = max(max(abs(s.forms.B_ww), abs(s.forms.B_wxi)) for s in samples)
    umb = []
    for s in samples:
        gww = mdot(s.frame.w, s.frame.w)
        rho = s.forms.rho if s.forms.rho is not None else 0.0
        # B(xi, .) vanishing is checked, not assumed
        umb.append(max(abs(s.forms.B_ww - rho * gww), abs(s.forms.B_wxi), abs(s.forms.B_xixi)))
    conf = [_conformal_residual(s.forms, tols) for s in samples]
    c_xi = [abs(s.forms.C_xiw) for s in samples]
    pl_nd = max(s.nondegenerate.planarity_residual for s in samples)
    pl_d = max(s.degenerate.planarity_residual for s in samples)

    geodesic = max_B <= tols.geodesic
    umbilical = max(umb) <= tols.umbilical
    conformal = max(conf) <= tols.conformal and max(c_xi) <= tols.conformal
    planar_nd = pl_nd <= tols.planar
    rhs = (umbilical and conformal) or geodesic
    return Classification(
        surface=name,
        totally_geodesic=geodesic, max_B=max_B,
        totally_umbilical=umbilical, max_umbilical_residual=max(umb),
        rho=[s.forms.rho for s in samples],
        screen_conformal=conformal, max_conformal_residual=max(conf), max_C_xi=max(c_xi),
        phi=[s.forms.phi for s in samples],
        planar_nondegenerate=planar_nd, max_planarity_nondegenerate=pl_nd,
        planar_degenerate=pl_d <= tols.planar, max_planarity_degenerate=pl_d,
        characterization_consistent=(planar_nd == rhs),
        grid={"n_u": grid[0], "n_v": grid[1], "margin": 0.01, "order": "row-major"},
        tolerances=asdict(tols),
        errors=list(errors),
    )


def classify_surface(surface: SurfaceDef, grid=(10, 10), tols: Tolerances = Tolerances()) -> Classification:
    samples, errors = sample_grid(surface, grid, tols)
    return classify_samples(surface.name, samples, grid, tols, errors)


# ------------------------------------------------------------------ harnesses

@dataclass
class HarnessEntry:
    surface: SurfaceDef
    status: str  # 'consistent' | 'counterexample' | 'grid-failure'
    classification: Classification | None = None
    message: str = ""


@dataclass
class HarnessReport:
    entries: list
    seed: int | None = None

    @property
    def counterexamples(self):
        return [e for e in self.entries if e.status == "counterexample"]

    @property
    def failures(self):
        return [e for e in self.entries if e.status == "grid-failure"]

    @property
    def consistent(self):
        return not self.counterexamples


def planarity_harness(surfaces, grid=(10, 10), tols: Tolerances = Tolerances(),
                      classifier=classify_surface, seed=None) -> HarnessReport:
    """Planar non-degenerate sections <=> (umbilical and conformal) or geodesic, per surface."""
    surfaces = list(surfaces)
    if not surfaces:
        raise ValueError("no surfaces to check")
    entries = []
    for s in surfaces:
        try:
            c = classifier(s, grid, tols)
        except GridFailure as exc:
            entries.append(HarnessEntry(s, "grid-failure", message=str(exc)))
            continue
        status = "consistent" if c.characterization_holds() else "counterexample"
        msg = "" if status == "consistent" else (
            f"planar={c.planar_nondegenerate} (max {c.max_planarity_nondegenerate:.3g}), "
            f"umbilical={c.totally_umbilical} (max {c.max_umbilical_residual:.3g}), "
            f"conformal={c.screen_conformal} (max {c.max_conformal_residual:.3g}, "
            f"C(xi,w) {c.max_C_xi:.3g}), geodesic={c.totally_geodesic} (max |B| {c.max_B:.3g})")
        entries.append(HarnessEntry(s, status, c, msg))
    return HarnessReport(entries, seed)


@dataclass
class VertexSample:
    u: float
    v: float
    nabla_t: float      # |(D_w T)(w, w)|
    planarity: float
    vertex: float       # |<D_w T, T>|
    wedge: float        # |T x D_w T|
    agrees: bool


@dataclass
class VertexReport:
    surface: str
    samples: list

    @property
    def holds(self):
        return all(s.agrees for s in self.samples)


def vertex_harness(surface: SurfaceDef, grid=(10, 10), tols: Tolerances = Tolerances(),
                   classification: Classification | None = None) -> VertexReport:
    """Sample-wise check of (D_w T)(w,w) = 0  <=>  planar section with a vertex at p.

    Raises NotApplicable unless the surface is screen conformal and not
    totally umbilical.  Passing ``classification`` skips re-classification
    (and lets callers exercise the evaluation on any surface).
    """
    samples, _ = sample_grid(surface, grid, tols)
    if classification is None:
        classification = classify_samples(surface.name, samples, grid, tols)
    if not in_vertex_class(classification):
        raise NotApplicable(
            f"{surface.name}: needs screen conformal and non-umbilical "
            f"(conformal={classification.screen_conformal}, umbilical={classification.totally_umbilical})")
    return vertex_report(surface.name, samples, tols)


def in_vertex_class(c: Classification) -> bool:
    return c.screen_conformal and not c.totally_umbilical


def vertex_report(name, samples, tols: Tolerances = Tolerances()) -> VertexReport:
    """Evaluate the vertex equivalence on already analyzed samples."""
    out = []
    for s in samples:
        nd = s.nondegenerate
        a = float(np.linalg.norm(nd.nablaT_ww))
        c1, c2 = nd.planarity_residual, nd.vertex_residual
        wedge = float(np.linalg.norm(np.cross(nd.T_ww, nd.nablaT_ww)))
        agrees = (a <= tols.nabla_t) == (c1 <= tols.planar and c2 <= tols.vertex)
        out.append(VertexSample(s.u, s.v, a, c1, c2, wedge, agrees))
    return VertexReport(name, out)


@dataclass
class VertexSearch:
    tried: int
    seed: int
    reports: list
    not_applicable: list

    @property
    def empty(self):
        return not self.reports

    @property
    def holds(self):
        return all(r.holds for r in self.reports)


def vertex_search(surfaces, grid=(10, 10), tols: Tolerances = Tolerances(), seed=0, random=0):
    """Run the vertex harness on ``surfaces`` plus ``random`` generated ruled surfaces.

    Surfaces outside the hypothesis class are collected in ``not_applicable``;
    ``empty`` means no instance of the class turned up within the budget.
    """
    candidates = list(surfaces) + (random_null_ruled_family(seed, random) if random else [])
    reports, skipped = [], []
    for s in candidates:
        try:
            reports.append(vertex_harness(s, grid, tols))
        except NotApplicable as exc:
            skipped.append((s.name, str(exc)))
        except GridFailure as exc:
            skipped.append((s.name, f"grid failure: {exc}"))
    return VertexSearch(len(candidates), seed, reports, skipped)
