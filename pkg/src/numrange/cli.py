"""Command-line interface: ``numrange <command> ...``.

Exit codes: 0 success, 2 bad input (arguments, files, descriptors),
3 numerical failure, 4 containment violation in ``anderson``.
Diagnostics go to standard error as a single line.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import gallery
from .branches import hellmann_feynman_check, trace_branches
from .curves import anderson_check, parse_curve, segment_coincidence, theorem4_experiment
from .errors import BranchBreakError, ContainmentError, ConvergenceError, NumrangeError
from .essrange import (DEFAULT_SCHEDULE, OperatorFamily, ess_range_estimate,
                       essential_support_check, parse_family, parse_schedule)
from .fileio import fmt, matrix_to_json, read_matrix, svg, sweep_csv
from .support import boundary_sweep

FAMILY_HELP = """\
family descriptors:
  diagonal:<rule>                     rules: exp-i-over-k, one-then-i-over-k, i-over-k, zero
  shift:unit                          unilateral shift S e_k = e_{k+1}
  blocks:<file>                       JSON {"blocks": [matrix, ...]}, repeated periodically
  finite-plus-diagonal:<file>:<rule>  matrix file, then the rule at indices beyond it
"""

CURVE_HELP = """\
curve descriptors:
  circle:<r>[:<cx>,<cy>]
  ellipse:<a>:<b>[:<cx>,<cy>[:<rot>]]  semi-axes a >= b > 0, rotation in radians
  tabulated:<file>                     CSV with header theta,h,dh,d2h
"""

MATRIX_HELP = """\
matrix files are JSON {"n": n, "entries": [[[re, im], ...], ...]} (row-major).
gallery names take arguments as name(a,b) or name:a:b, e.g. jordan(5), random:10:3.
"""


class InputError(Exception):
    """Bad command-line input detected after argument parsing."""


def _point(text: str) -> complex:
    try:
        x, y = text.split(",")
        return complex(float(x), float(y))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected x,y but got {text!r}") from exc


def _matrix_source(p: argparse.ArgumentParser, family: bool = False) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", metavar="FILE", help="matrix file (JSON)")
    g.add_argument("--gallery", metavar="NAME", help="gallery item")
    if family:
        g.add_argument("--family", metavar="DESCRIPTOR", help="operator family descriptor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="numrange", description="Numerical ranges, eigenvalue branches and essential ranges.",
        epilog=MATRIX_HELP + FAMILY_HELP + CURVE_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    raw = argparse.RawDescriptionHelpFormatter

    p = sub.add_parser("boundary", help="support-line sweep of cl W(A)", epilog=MATRIX_HELP,
                       formatter_class=raw)
    _matrix_source(p)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--refine", action="store_true")
    p.add_argument("--tol", type=float, default=None, help="degeneracy tolerance")
    p.add_argument("--out", metavar="CSV")
    p.add_argument("--svg", metavar="FILE")

    p = sub.add_parser("branches", help="trace leading eigenvalue branches", epilog=MATRIX_HELP,
                       formatter_class=raw)
    _matrix_source(p)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--halfwidth", type=float, default=math.pi / 8)
    p.add_argument("--step", type=float, default=1e-2)
    p.add_argument("--top", type=int, default=1)
    p.add_argument("--out", metavar="CSV")

    p = sub.add_parser("ess", help="essential numerical range estimate", epilog=FAMILY_HELP,
                       formatter_class=raw)
    p.add_argument("--family", required=True, metavar="DESCRIPTOR")
    p.add_argument("--schedule", default=None, help="windows n1:N1,n2:N2,...")
    p.add_argument("--check-theta", type=float, action="append", default=[], metavar="THETA")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--out", metavar="JSON")
    p.add_argument("--svg", metavar="FILE")

    p = sub.add_parser("anderson", help="fill test against a convex analytic curve",
                       epilog=MATRIX_HELP + FAMILY_HELP + CURVE_HELP, formatter_class=raw)
    _matrix_source(p, family=True)
    p.add_argument("--curve", required=True, metavar="DESCRIPTOR")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--schedule", default=None, help="windows for --family")
    p.add_argument("--out", metavar="JSON")

    p = sub.add_parser("segment", help="part of a segment inside cl W(A)", epilog=MATRIX_HELP,
                       formatter_class=raw)
    _matrix_source(p)
    p.add_argument("--from", dest="p", type=_point, required=True, metavar="X,Y")
    p.add_argument("--to", dest="q", type=_point, required=True, metavar="X,Y")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--grid", type=int, default=1024)

    p = sub.add_parser("gallery", help="list or emit gallery items")
    gsub = p.add_subparsers(dest="action", required=True)
    gsub.add_parser("list")
    e = gsub.add_parser("emit")
    e.add_argument("name")
    e.add_argument("--out", metavar="FILE")
    return parser


def _load(args) -> np.ndarray:
    if getattr(args, "input", None):
        try:
            return read_matrix(args.input)
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from exc
    item = gallery.build(args.gallery)
    if not item.is_matrix:
        raise InputError(f"gallery item {item.name} is an operator family; use --family")
    return item.object


def _emit(text: str, path: str | None, stdout) -> None:
    if path:
        Path(path).write_text(text)
    else:
        stdout.write(text)


def _json(obj) -> str:
    return json.dumps(_plain(obj), indent=2) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def _poly(P) -> list:
    return [[float(z.real), float(z.imag)] for z in P.vertices] if P is not None else None


def _oracle_json(region):
    if region is None:
        return None
    if hasattr(region, "vertices"):
        return {"polygon": _poly(region)}
    return {"disk": {"center": [region.center.real, region.center.imag], "radius": region.radius}}


def cmd_boundary(args, stdout) -> int:
    A = _load(args)
    B = boundary_sweep(A, grid=args.grid, refine=args.refine, degeneracy_tol=args.tol)
    _emit(sweep_csv(B), args.out, stdout)
    if args.svg:
        Path(args.svg).write_text(svg([("black", B.polygon.vertices, True)]))
    return 0


def cmd_branches(args, stdout) -> int:
    A = _load(args)
    branches = trace_branches(A, args.center, args.halfwidth, args.step, args.top)
    lines = ["theta,branch,lambda,zx,zy,is_top"]
    rows = []
    for j, br in enumerate(branches):
        for t, lam, z, top in zip(br.thetas, br.lambdas, br.zetas, br.is_top):
            rows.append((t, j, lam, z, top))
    rows.sort(key=lambda r: (r[0], r[1]))
    for t, j, lam, z, top in rows:
        lines.append(f"{fmt(t)},{j},{fmt(lam)},{fmt(z.real)},{fmt(z.imag)},{int(top)}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        dev = max(hellmann_feynman_check(A, br) for br in branches)
    skipped = sum(1 for w in caught if issubclass(w.category, RuntimeWarning))
    note = f"# hellmann-feynman max deviation: {fmt(dev)}"
    if skipped:
        note += " (degenerate samples skipped)"
    lines.append(note)
    _emit("\n".join(lines) + "\n", args.out, stdout)
    return 0


def _schedule(text):
    return DEFAULT_SCHEDULE if text is None else parse_schedule(text)


def cmd_ess(args, stdout) -> int:
    fam = parse_family(args.family)
    sched = _schedule(args.schedule)
    est = ess_range_estimate(fam, sched, grid=args.grid)
    checks = []
    for th in args.check_theta:
        c = essential_support_check(fam, th, sched)
        checks.append({"theta": th, "verdict": c.verdict, "mu_full": c.mu_full,
                       "mu_tail": c.mu_tail, "gaps": c.gaps, "intercept": c.intercept,
                       "floor": c.floor})
    doc = {
        "family": fam.describe(),
        "schedule": [list(w) for w in est.sections],
        "windows": [_poly(P) for P in est.windows],
        "polygons": [_poly(P) for P in est.polygons],
        "intersection": _poly(est.intersection),
        "empty": est.empty,
        "resolution": est.resolution,
        "oracle": _oracle_json(est.oracle),
        "checks": checks,
    }
    _emit(_json(doc), args.out, stdout)
    if args.svg:
        layers = [("#bbbbbb", P.vertices, True) for P in est.windows]
        if est.intersection is not None:
            layers.append(("black", est.intersection.vertices, True))
        Path(args.svg).write_text(svg(layers))
    return 0


def cmd_anderson(args, stdout) -> int:
    curve = parse_curve(args.curve)
    if args.family:
        fam: OperatorFamily = parse_family(args.family)
        res = theorem4_experiment(fam, curve, _schedule(args.schedule), tol=args.tol)
        est, rep = res.pop("estimate"), res.pop("report")
        res["verdict_record"] = "hypothesis-failure" if not res["hypotheses_hold"] else "hypotheses-hold"
        res["ess_estimate"] = _poly(est.intersection)
        res["ess_resolution"] = est.resolution
        res["intersection"] = rep.to_dict() if rep is not None else None
        _emit(_json(res), args.out, stdout)
        return 0
    A = _load(args)
    res = anderson_check(A, curve, args.tol, grid=args.grid)
    rep = res.pop("report")
    res["intersection"] = rep.to_dict()
    _emit(_json(res), args.out, stdout)
    return 0


def cmd_segment(args, stdout) -> int:
    A = _load(args)
    if args.p == args.q:
        raise InputError("--from and --to must differ")
    B = boundary_sweep(A, grid=args.grid)
    sub = segment_coincidence(B, args.p, args.q, args.tol)
    if sub.empty:
        stdout.write("empty\n")
    else:
        stdout.write(f"{fmt(sub.start.real)},{fmt(sub.start.imag)} "
                     f"{fmt(sub.end.real)},{fmt(sub.end.imag)}\n")
    return 0


def cmd_gallery(args, stdout) -> int:
    if args.action == "list":
        for name, desc in gallery.CATALOGUE.items():
            stdout.write(f"{name}\t{desc}\n")
        return 0
    item = gallery.build(args.name)
    if not item.is_matrix:
        raise InputError(f"{item.name} is an operator family and has no matrix file")
    _emit(matrix_to_json(item.object) + "\n", args.out, stdout)
    return 0


COMMANDS = {"boundary": cmd_boundary, "branches": cmd_branches, "ess": cmd_ess,
            "anderson": cmd_anderson, "segment": cmd_segment, "gallery": cmd_gallery}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return COMMANDS[args.command](args, stdout)
    except ContainmentError as exc:
        stderr.write(f"numrange: containment violated: {exc}\n")
        return 4
    except (ConvergenceError, BranchBreakError, ArithmeticError, np.linalg.LinAlgError) as exc:
        stderr.write(f"numrange: numerical failure: {exc}\n")
        return 3
    except (NumrangeError, InputError, ValueError, OSError) as exc:
        stderr.write(f"numrange: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
