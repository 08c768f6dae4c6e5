"""Analysis reports and their JSON / CSV serialization.

JSON is the canonical format.  Floats are written with 17 significant digits
so every double survives a round trip, ``None`` becomes ``null`` and
non-finite values use the ``Infinity`` / ``NaN`` tokens Python's json module
reads back.  Key order is fixed, so equal reports give identical bytes.
"""
import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .classify import Classification, Sample, Tolerances
from .expr import SurfaceDef, to_text

SCHEMA = "lightlike-report/1"

# per-sample columns, in output order; vector entries expand to name_0.._2 in CSV
SAMPLE_SCALARS = (
    "u", "v", "gauge_scale",
    "B_ww", "B_wxi", "B_xixi", "C_ww", "C_xiw", "tau_w", "tau_xi", "eps_w", "eps_xi",
    "rho", "phi",
    "planarity_degenerate", "planarity_nondegenerate", "collinearity_nondegenerate",
    "kappa_sq", "kappa_sq_identity_residual", "kappa_sq_pure_residual",
    "vertex_residual", "t_fit",
)
SAMPLE_VECTORS = ("point", "xi", "w", "N", "A_xi_star_w", "A_N_w", "nabla_star_ww",
                  "gamma2", "gamma3", "T_ww", "nablaT_ww")
CLASSIFICATION_KEYS = tuple(f.name for f in fields(Classification)
                            if f.name not in ("grid", "tolerances", "rho", "phi", "errors"))


def _vec(x):
    return [float(c) for c in np.asarray(x, dtype=float)]


def _opt(x):
    return None if x is None else float(x)


def sample_record(s: Sample) -> dict:
    fr, fd, deg, nd = s.frame, s.forms, s.degenerate, s.nondegenerate
    rec = {
        "u": float(s.u), "v": float(s.v), "gauge_scale": float(fr.gauge_scale),
        "B_ww": float(fd.B_ww), "B_wxi": float(fd.B_wxi), "B_xixi": float(fd.B_xixi),
        "C_ww": float(fd.C_ww), "C_xiw": float(fd.C_xiw),
        "tau_w": float(fd.tau_w), "tau_xi": float(fd.tau_xi),
        "eps_w": float(fd.eps_w), "eps_xi": float(fd.eps_xi),
        "rho": _opt(fd.rho), "phi": _opt(fd.phi),
        "planarity_degenerate": float(deg.planarity_residual),
        "planarity_nondegenerate": float(nd.planarity_residual),
        "collinearity_nondegenerate": float(nd.collinearity_residual),
        "kappa_sq": _opt(nd.kappa_sq),
        "kappa_sq_identity_residual": _opt(nd.kappa_sq_identity_residual),
        "kappa_sq_pure_residual": _opt(nd.kappa_sq_pure_residual),
        "vertex_residual": _opt(nd.vertex_residual),
        "t_fit": _opt(nd.t_fit),
        "point": _vec(fr.point), "xi": _vec(fr.xi), "w": _vec(fr.w), "N": _vec(fr.N),
        "A_xi_star_w": _vec(fd.A_xi_star_w), "A_N_w": _vec(fd.A_N_w),
        "nabla_star_ww": _vec(fd.nabla_star_ww),
        "gamma2": _vec(nd.gamma2), "gamma3": _vec(nd.gamma3),
        "T_ww": _vec(nd.T_ww), "nablaT_ww": _vec(nd.nablaT_ww),
    }
    return {k: rec[k] for k in SAMPLE_SCALARS + SAMPLE_VECTORS}


def surface_record(s: SurfaceDef) -> dict:
    return {
        "name": s.name,
        "x0": to_text(s.x0), "x1": to_text(s.x1), "x2": to_text(s.x2),
        "u_range": [float(x) for x in s.u_range],
        "v_range": [float(x) for x in s.v_range],
        "gauge": str(s.gauge),
    }


def classification_record(c: Classification) -> dict:
    rec = {}
    for k in CLASSIFICATION_KEYS:
        val = getattr(c, k)
        rec[k] = float(val) if isinstance(val, (float, np.floating)) else val
    return rec


@dataclass
class AnalysisReport:
    surface: dict
    grid: dict
    tolerances: dict
    samples: list
    classification: dict
    harness: dict
    seeds: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)
    tool_version: str = ""
    schema: str = SCHEMA

    @classmethod
    def build(cls, surface: SurfaceDef, samples, classification: Classification,
              tols: Tolerances, harness=None, seeds=None, errors=()):
        from . import __version__
        return cls(
            surface=surface_record(surface),
            grid=dict(classification.grid),
            tolerances=asdict(tols),
            samples=[sample_record(s) for s in samples],
            classification=classification_record(classification),
            harness=dict(harness or {}),
            seeds=dict(seeds or {}),
            errors=[dict(e) for e in errors],
            tool_version=__version__,
        )

    def to_dict(self) -> dict:
        d = {"schema": self.schema, "tool_version": self.tool_version}
        for f in fields(self):
            if f.name not in d:
                d[f.name] = getattr(self, f.name)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        return samples_to_csv(self.samples)


# ----------------------------------------------------------------- writers

def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"  # keep floats distinguishable from integers
    return text


def _dump(obj, out, indent, level):
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + pad + json.dumps(str(k)) + ": ")
            _dump(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
        elif all(isinstance(x, (int, float, np.number)) and not isinstance(x, bool) or x is None
                 for x in items):
            # numeric rows stay on one line
            parts = []
            for x in items:
                sub = []
                _dump(x, sub, indent, level + 1)
                parts.append("".join(sub))
            out.append("[" + ", ".join(parts) + "]")
        else:
            out.append("[")
            for i, v in enumerate(items):
                out.append(("," if i else "") + pad)
                _dump(v, out, indent, level + 1)
            out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2) -> str:
    out = []
    _dump(obj, out, indent, 0)
    return "".join(out) + "\n"


def csv_columns():
    cols = list(SAMPLE_SCALARS)
    for name in SAMPLE_VECTORS:
        cols.extend(f"{name}_{i}" for i in range(3))
    return cols


def samples_to_csv(samples) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_columns())
    for rec in samples:
        row = []
        for name in SAMPLE_SCALARS:
            x = rec[name]
            row.append("" if x is None else format_float(x))
        for name in SAMPLE_VECTORS:
            row.extend(format_float(x) for x in rec[name])
        writer.writerow(row)
    return buf.getvalue()


def csv_to_samples(text: str) -> list:
    """Inverse of ``samples_to_csv``."""
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for row in reader:
        rec = {name: (None if row[name] == "" else float(row[name])) for name in SAMPLE_SCALARS}
        for name in SAMPLE_VECTORS:
            rec[name] = [float(row[f"{name}_{i}"]) for i in range(3)]
        out.append(rec)
    return out
