"""Lightlike surfaces in Minkowski 3-space.

Build the null frame (xi, w, N) of a parametrized surface with jet arithmetic,
compute its induced forms and shape operators, test normal sections for
planarity and classify the surface.
"""
from ._kernels import BACKEND
from .catalog import builtin, builtin_surfaces, random_null_ruled, random_null_ruled_family, resolve
from .classify import (Classification, Tolerances, classify_surface, planarity_harness,
                       vertex_harness, vertex_search)
from .errors import *  # noqa: F401,F403
from .expr import Gauge, SurfaceDef, eval_jet3, evaluate, load_surface, parse_expr, parse_surface
from .forms import FormData, compute_forms, gauge_transform_check
from .frames import LightlikeFrame, frame_at, induced_metric
from .jets import Jet3, jet_compose, jet_const, jet_mul, jet_var
from .minkowski import mdot, solve_transversal, triple_product
from .sections import SectionReport, analyze_sections

__version__ = "0.1.0"
