"""Builtin lightlike surfaces and a seeded generator of null ruled surfaces."""
from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationFailed, UnknownSurface
from .expr import SurfaceDef, load_surface, parse_expr

TWO_PI = 6.2832


@dataclass(frozen=True)
class CatalogEntry:
    surface: SurfaceDef
    expected: dict = field(default_factory=dict)  # partial classification verdicts


def _surface(name, x0, x1, x2, u_range, v_range):
    return SurfaceDef(name, parse_expr(x0), parse_expr(x1), parse_expr(x2), u_range, v_range)


def _null_cone():
    # the light cone -x0^2 + x1^2 + x2^2 = 0, apex excluded
    return CatalogEntry(
        _surface("null-cone", "u", "u*cos(v)", "u*sin(v)", (0.5, 2.0), (0.0, TWO_PI)),
        {"totally_geodesic": False, "totally_umbilical": True, "screen_conformal": True,
         "planar_nondegenerate": True, "planar_degenerate": True},
    )


def _null_plane():
    return CatalogEntry(
        _surface("null-plane", "u", "u", "v", (0.0, 1.0), (0.0, 1.0)),
        {"totally_geodesic": True, "planar_nondegenerate": True, "planar_degenerate": True},
    )


def _null_cylinder():
    return CatalogEntry(
        _surface("null-cylinder", "u", "u", "sin(v) + 2*v", (0.0, 1.0), (0.0, TWO_PI)),
        {"totally_geodesic": True, "planar_nondegenerate": True, "planar_degenerate": True},
    )


def null_graph(F="(3*u + 4*v)/5", name="null-graph-demo", u_range=(-1.0, 1.0), v_range=(-1.0, 1.0)):
    """Graph x0 = F(x1, x2) over the (x1, x2)-plane; lightlike when |grad F| = 1."""
    return _surface(name, F, "u", "v", u_range, v_range)


def _null_graph_demo():
    return CatalogEntry(
        null_graph(),
        {"totally_geodesic": True, "planar_nondegenerate": True, "planar_degenerate": True},
    )


BUILTINS = {
    "null-cone": _null_cone,
    "null-plane": _null_plane,
    "null-cylinder": _null_cylinder,
    "null-graph-demo": _null_graph_demo,
}


def builtin(name: str) -> CatalogEntry:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise UnknownSurface(name) from None


def builtin_surfaces():
    return [builtin(name).surface for name in BUILTINS]


# ---------------------------------------------------------- null ruled surfaces

RULED_U = (0.5, 1.5)
RULED_V = (0.0, 1.0)
MIN_ANGLE_RATE = 0.05
MAX_RETRIES = 100


@dataclass(frozen=True)
class RuledParams:
    """theta(v) = a0 + sum_k a_k cos(kv) + b_k sin(kv); P(theta) = p0 + p1 theta."""
    a: tuple[float, ...]  # a0, a1, a2, a3
    b: tuple[float, ...]  # b1, b2, b3
    p: tuple[float, float]

    def theta_text(self):
        terms = [repr(self.a[0])]
        for k in range(1, len(self.a)):
            terms.append(f"{self.a[k]!r}*cos({k}*v)")
            terms.append(f"{self.b[k - 1]!r}*sin({k}*v)")
        return "(" + " + ".join(terms) + ")"

    def theta_rate(self, v):
        v = np.asarray(v, dtype=float)
        out = np.zeros_like(v)
        for k in range(1, len(self.a)):
            out += k * (-self.a[k] * np.sin(k * v) + self.b[k - 1] * np.cos(k * v))
        return out


def null_ruled_surface(params: RuledParams, name="null-ruled", u_range=RULED_U, v_range=RULED_V):
    """f(u, v) = alpha(v) + u delta(v) with delta = (1, cos theta, sin theta).

    The directrix satisfies alpha' = c delta with c = theta' P(theta), which
    integrates in closed form, so g(f_u, f_u) = g(f_u, f_v) = 0 identically and
    g(f_v, f_v) = u^2 theta'^2.
    """
    th = params.theta_text()
    p0, p1 = params.p
    x0 = f"{p0!r}*{th} + {p1!r}*{th}^2/2 + u"
    x1 = f"{p0!r}*sin({th}) + {p1!r}*({th}*sin({th}) + cos({th})) + u*cos({th})"
    x2 = f"-{p0!r}*cos({th}) + {p1!r}*(sin({th}) - {th}*cos({th})) + u*sin({th})"
    return _surface(name, x0, x1, x2, u_range, v_range)


def admissible(params: RuledParams, v_range=RULED_V, samples=400) -> bool:
    """The screen must stay non-degenerate: theta' bounded away from 0 on the chart."""
    vs = np.linspace(v_range[0], v_range[1], samples)
    return bool(np.min(np.abs(params.theta_rate(vs))) >= MIN_ANGLE_RATE)


def random_ruled_params(rng: np.random.Generator) -> RuledParams:
    a = tuple(float(x) for x in rng.uniform(-1.0, 1.0, 4))
    b = tuple(float(x) for x in rng.uniform(-1.0, 1.0, 3))
    p = tuple(float(x) for x in rng.uniform(-1.0, 1.0, 2))
    return RuledParams(a, b, p)


def random_null_ruled(seed: int) -> SurfaceDef:
    """Seeded random null ruled surface; retries until the screen is regular."""
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RETRIES):
        params = random_ruled_params(rng)
        if admissible(params):
            return null_ruled_surface(params, name=f"null-ruled-{seed}")
    raise GenerationFailed(f"no admissible ruled surface for seed {seed} after {MAX_RETRIES} tries")


def random_null_ruled_family(seed: int, count: int):
    """``count`` surfaces from consecutive sub-seeds of ``seed``."""
    seeds = np.random.SeedSequence(seed).generate_state(count)
    return [random_null_ruled(int(s)) for s in seeds]


def resolve(source: str) -> SurfaceDef:
    """``builtin:NAME`` or a path to a surface file."""
    if source.startswith("builtin:"):
        return builtin(source[len("builtin:"):]).surface
    return load_surface(source)
