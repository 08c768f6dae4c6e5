"""Command-line front end: ``lightlike analyze | verify | theorem``.

Exit codes: 0 success, 1 usage / I/O / parse errors, 2 when the surface or
the checked statement says no (not lightlike, counterexample found).
"""
import argparse
import sys
from dataclasses import replace

from . import __version__
from .catalog import builtin_surfaces, random_null_ruled_family, resolve
from .classify import (Tolerances, classify_samples, in_vertex_class, planarity_harness,
                       sample_grid, vertex_report, vertex_search)
from .errors import (DomainError, ExprSyntaxError, GridFailure, LightlikeError, NotLightlike,
                     RankZero, SurfaceFormatError, UnknownSurface)
from .expr import Gauge, format_surface
from .frames import frame_at
from .report import AnalysisReport, classification_record, dumps, surface_record
from .verify import run_verify

EXIT_OK, EXIT_ERROR, EXIT_REJECTED = 0, 1, 2
HARNESS_SCHEMA = "lightlike-harness/1"
EMPTY_CLASS = "hypothesis class empty in search budget"

WHICH = {"31": "planarity", "planarity": "planarity", "32": "vertex", "vertex": "vertex"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _grid(text):
    try:
        a, b = text.lower().split("x")
        n_u, n_v = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like NxM, got {text!r}") from None
    if n_u < 2 or n_v < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points per direction")
    return n_u, n_v


def _positive(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return x


def _count(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text!r}")
    return n


def build_parser():
    p = _Parser(prog="lightlike", description="Analyze lightlike surfaces in Minkowski 3-space.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="classify one surface and write a report")
    a.add_argument("--surface", required=True, help="surface file or builtin:NAME")
    a.add_argument("--grid", type=_grid, default=(20, 20), help="NxM samples (default 20x20)")
    a.add_argument("--gauge", help="unit or scale:EXPR (overrides the surface file)")
    a.add_argument("--tol-degenerate", type=_positive, default=Tolerances.degenerate)
    a.add_argument("--tol-planar", type=_positive, default=Tolerances.planar)
    a.add_argument("--out", help="output path (default: standard output)")
    a.add_argument("--format", choices=("json", "csv"), default="json")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run the invariant suites")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--surfaces", help="comma-separated surface files or builtin:NAME (default: catalog)")
    v.add_argument("--random", type=_count, default=0, help="add N seeded random null ruled surfaces")
    v.add_argument("--points", type=_count, default=100, help="random points per surface")
    v.add_argument("--gauges", type=_count, default=20, help="random scale gauges per surface")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("theorem", help="run a characterization harness")
    t.add_argument("--which", required=True, choices=sorted(WHICH),
                   help="31/planarity: planar sections biconditional; 32/vertex: vertex equivalence")
    t.add_argument("--random", type=_count, default=10, help="seeded random null ruled surfaces to add")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--grid", type=_grid, default=(10, 10))
    t.add_argument("--out", help="write the harness report (JSON) here")
    t.set_defaults(func=cmd_theorem)
    return p


def _err(msg):
    print(msg, file=sys.stderr)


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(source):
    try:
        return resolve(source)
    except FileNotFoundError:
        raise UsageError(f"no such surface file: {source}") from None
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror or exc}") from None
    except UnknownSurface as exc:
        raise UsageError(str(exc)) from None
    except (SurfaceFormatError, ExprSyntaxError) as exc:
        raise UsageError(f"{source}: {type(exc).__name__}: {exc}") from None


# ----------------------------------------------------------------- analyze

def cmd_analyze(args):
    surface = _load(args.surface)
    if args.gauge is not None:
        try:
            surface = surface.with_gauge(Gauge.parse(args.gauge))
        except (SurfaceFormatError, ExprSyntaxError) as exc:
            raise UsageError(f"--gauge: {exc}") from None
    tols = replace(Tolerances(), degenerate=args.tol_degenerate, planar=args.tol_planar)

    # reject non-lightlike input before sampling the whole grid
    u_mid = 0.5 * (surface.u_range[0] + surface.u_range[1])
    v_mid = 0.5 * (surface.v_range[0] + surface.v_range[1])
    try:
        frame_at(surface, u_mid, v_mid, tols.degenerate)
    except (NotLightlike, RankZero) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_REJECTED
    except DomainError:
        pass  # the grid reports it, or fails below

    try:
        samples, errors = sample_grid(surface, args.grid, tols)
    except GridFailure as exc:
        kinds = {e["error"] for e in exc.errors}
        _err(f"GridFailure: {exc}")
        for e in exc.errors[:5]:
            _err(f"  ({e['u']:.6g}, {e['v']:.6g}) {e['error']}: {e['message']}")
        return EXIT_REJECTED if kinds <= {"NotLightlike", "RankZero"} else EXIT_ERROR

    cls = classify_samples(surface.name, samples, args.grid, tols, errors)
    vertex = "not-applicable"
    if in_vertex_class(cls):
        vertex = "holds" if vertex_report(surface.name, samples, tols).holds else "fails"
    harness = {
        "planarity": "consistent" if cls.characterization_holds() else "counterexample",
        "vertex": vertex,
    }
    report = AnalysisReport.build(surface, samples, cls, tols, harness=harness, errors=errors)
    _write(report.to_json() if args.format == "json" else report.to_csv(), args.out)
    return EXIT_OK


# ------------------------------------------------------------------ verify

def cmd_verify(args):
    if args.surfaces:
        surfaces = [_load(s.strip()) for s in args.surfaces.split(",") if s.strip()]
        if not surfaces:
            raise UsageError("--surfaces is empty")
    else:
        surfaces = builtin_surfaces()
    if args.random:
        surfaces += random_null_ruled_family(args.seed, args.random)

    result = run_verify(surfaces, seed=args.seed, points=args.points, gauges=args.gauges)
    for chk in result.checks:
        if not chk.passed:
            print(chk.line())
    n_fail = sum(not c.passed for c in result.checks)
    print(f"{len(result.checks) - n_fail}/{len(result.checks)} checks passed "
          f"on {len(surfaces)} surface(s), seed {args.seed}")
    first = result.first_failure
    if first is not None:
        _err(f"first failing invariant: {first.invariant} ({first.suite}, {first.surface})")
        return EXIT_ERROR
    return EXIT_OK


# ----------------------------------------------------------------- theorem

def _harness_json(kind, seed, grid, random, entries, verdict, extra=None):
    doc = {
        "schema": HARNESS_SCHEMA,
        "tool_version": __version__,
        "harness": kind,
        "seeds": {"random_surfaces": seed},
        "random_surfaces": random,
        "grid": {"n_u": grid[0], "n_v": grid[1]},
        "verdict": verdict,
        "entries": entries,
    }
    doc.update(extra or {})
    return dumps(doc)


def _planarity(args):
    surfaces = builtin_surfaces() + random_null_ruled_family(args.seed, args.random)
    rep = planarity_harness(surfaces, args.grid, seed=args.seed)
    entries = []
    for e in rep.entries:
        rec = {"surface": surface_record(e.surface), "status": e.status, "message": e.message}
        if e.classification is not None:
            rec["classification"] = classification_record(e.classification)
        if e.status != "consistent":
            rec["replay"] = format_surface(e.surface)
        entries.append(rec)
        print(f"{e.status:14s} {e.surface.name}" + (f"  {e.message}" if e.message else ""))

    if rep.counterexamples:
        verdict, code = "counterexample", EXIT_REJECTED
    elif rep.failures:
        verdict, code = "grid-failure", EXIT_ERROR
    else:
        verdict, code = "consistent", EXIT_OK
    for e in rep.counterexamples + rep.failures:
        _err(f"--- {e.status}: {e.surface.name} (replay file follows)")
        _err(format_surface(e.surface).rstrip("\n"))
    print(f"{verdict}: {len(rep.entries)} surfaces, "
          f"{len(rep.counterexamples)} counterexample(s), {len(rep.failures)} grid failure(s)")
    if args.out:
        _write(_harness_json("planarity", args.seed, args.grid, args.random, entries, verdict), args.out)
    return code


def _vertex(args):
    search = vertex_search(builtin_surfaces(), args.grid, seed=args.seed, random=args.random)
    entries = [{"surface": name, "status": "not-applicable", "message": msg}
               for name, msg in search.not_applicable]
    for r in search.reports:
        bad = [s for s in r.samples if not s.agrees]
        entries.append({"surface": r.surface, "status": "holds" if not bad else "counterexample",
                        "disagreeing_samples": [[s.u, s.v] for s in bad]})
    if search.empty:
        verdict, code = EMPTY_CLASS, EXIT_OK
    elif search.holds:
        verdict, code = "consistent", EXIT_OK
    else:
        verdict, code = "counterexample", EXIT_REJECTED
    print(f"{verdict} ({search.tried} surfaces tried, seed {args.seed})")
    if args.out:
        _write(_harness_json("vertex", args.seed, args.grid, args.random, entries, verdict), args.out)
    return code


def cmd_theorem(args):
    return _planarity(args) if WHICH[args.which] == "planarity" else _vertex(args)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _err(f"error: {exc}")
        return EXIT_ERROR
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_ERROR
    except LightlikeError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
