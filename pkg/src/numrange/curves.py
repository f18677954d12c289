"""Convex analytic curves and how a numerical range meets them.

A curve is stored through the support function ``h`` of the convex region
``D`` it bounds.  Its boundary parametrization by outward normal angle is
``gamma(theta) = exp(i theta) (h + i h')`` with speed ``h + h''``, which must
stay positive (a regular, strictly convex curve).  Line segments violate this
and are handled by :func:`segment_coincidence` instead.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import minimize_scalar

from . import geometry
from .errors import ContainmentError, CurveInvalidError, PreconditionError
from .essrange import OperatorFamily, ess_range_estimate, truncate
from .support import NumericalRangeBoundary, boundary_sweep, contains_point

TWO_PI = geometry.TWO_PI


class ConvexAnalyticCurve:
    """Regular strictly convex curve given by its support function.

    Use the constructors :meth:`circle`, :meth:`ellipse` and :meth:`tabulated`.
    ``arc`` optionally restricts the curve to the normal angles
    ``[arc[0], arc[1]]`` (a compact sub-arc of the boundary of ``D``).
    """

    def __init__(self, form: str, params: dict, arc: tuple[float, float] | None = None):
        self.form = form
        self.params = params
        if arc is not None:
            a0, a1 = float(arc[0]), float(arc[1])
            if not a0 < a1 <= a0 + TWO_PI:
                raise PreconditionError("arc must satisfy a0 < a1 <= a0 + 2 pi")
            arc = (a0, a1)
        self.arc = arc
        self._validate()

    # constructors ---------------------------------------------------------
    @classmethod
    def circle(cls, radius: float = 1.0, center: complex = 0.0, arc=None) -> ConvexAnalyticCurve:
        if not radius > 0:
            raise CurveInvalidError("circle radius must be positive")
        return cls("circle", {"radius": float(radius), "center": complex(center)}, arc)

    @classmethod
    def ellipse(cls, a: float, b: float, center: complex = 0.0, rotation: float = 0.0,
                arc=None) -> ConvexAnalyticCurve:
        """Ellipse with semi-axes ``a >= b > 0``, the ``a`` axis at angle ``rotation``."""
        if not (a >= b > 0):
            raise CurveInvalidError("ellipse needs semi-axes a >= b > 0")
        return cls("ellipse", {"a": float(a), "b": float(b), "center": complex(center),
                               "rotation": float(rotation)}, arc)

    @classmethod
    def tabulated(cls, thetas, h, dh, d2h, arc=None) -> ConvexAnalyticCurve:
        """Curve from samples of ``h``, ``h'`` and ``h''`` at matching angles.

        Without ``arc`` the samples must cover one period ``[t0, t0 + 2 pi)``.
        """
        th = np.asarray(thetas, dtype=float)
        tabs = [np.asarray(v, dtype=float) for v in (h, dh, d2h)]
        if th.ndim != 1 or th.size < 4 or any(v.shape != th.shape for v in tabs):
            raise PreconditionError("tabulated curve needs at least 4 matching samples")
        if np.any(np.diff(th) <= 0):
            raise PreconditionError("tabulated angles must be strictly increasing")
        if not all(np.all(np.isfinite(v)) for v in (th, *tabs)):
            raise PreconditionError("tabulated data must be finite")
        if arc is None and th[-1] - th[0] >= TWO_PI:
            raise PreconditionError("closed tabulated curves take samples in one period")
        return cls("tabulated", {"theta": th, "h": tabs[0], "dh": tabs[1], "d2h": tabs[2]}, arc)

    @classmethod
    def from_segment(cls, p: complex, q: complex, m: int = 720) -> ConvexAnalyticCurve:
        """Tabulate the support function of the segment ``[p, q]``.

        Always raises :class:`CurveInvalidError`: a segment has ``h + h'' = 0``
        away from its two normal directions.
        """
        th = TWO_PI * np.arange(m) / m
        rp, rq = np.exp(-1j * th) * p, np.exp(-1j * th) * q
        use_p = rp.real >= rq.real
        r = np.where(use_p, rp, rq)
        # h = Re(e^{-i t} z), h' = Im(e^{-i t} z), h'' = -h on each piece
        return cls.tabulated(th, r.real, r.imag, -r.real)

    # support function -----------------------------------------------------
    def _closed_tables(self):
        p = self.params
        th, h, dh, d2h = p["theta"], p["h"], p["dh"], p["d2h"]
        if self.arc is None:
            th = np.append(th, th[0] + TWO_PI)
            h, dh, d2h = (np.append(v, v[0]) for v in (h, dh, d2h))
        return th, h, dh, d2h

    def _splines(self):
        if not hasattr(self, "_cache"):
            th, h, dh, d2h = self._closed_tables()
            self._cache = (th, CubicHermiteSpline(th, h, dh), CubicHermiteSpline(th, dh, d2h), d2h)
        return self._cache

    def _reduce(self, theta):
        th = np.asarray(theta, dtype=float)
        if self.form != "tabulated":
            return th
        t0 = self.params["theta"][0]
        return np.mod(th - t0, TWO_PI) + t0

    def derivatives(self, theta) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(h, h', h'')`` at the given angles."""
        th = np.asarray(theta, dtype=float)
        p = self.params
        if self.form == "circle":
            rc = np.exp(-1j * th) * p["center"]
            return p["radius"] + rc.real, rc.imag, -rc.real
        if self.form == "ellipse":
            a, b = p["a"], p["b"]
            phi = th - p["rotation"]
            g = a * a * np.cos(phi) ** 2 + b * b * np.sin(phi) ** 2
            g1 = (b * b - a * a) * np.sin(2 * phi)
            g2 = 2 * (b * b - a * a) * np.cos(2 * phi)
            s = np.sqrt(g)
            rc = np.exp(-1j * th) * p["center"]
            return (s + rc.real, g1 / (2 * s) + rc.imag,
                    g2 / (2 * s) - g1 * g1 / (4 * s ** 3) - rc.real)
        tt, sh, sdh, d2 = self._splines()
        t = self._reduce(th)
        return sh(t), sdh(t), np.interp(t, tt, d2)

    def h(self, theta) -> np.ndarray:
        return self.derivatives(theta)[0]

    def support(self, thetas) -> np.ndarray:
        return np.atleast_1d(self.h(np.atleast_1d(np.asarray(thetas, dtype=float))))

    def kinks(self) -> np.ndarray:
        return np.zeros(0)

    def speed(self, theta) -> np.ndarray:
        h, _, h2 = self.derivatives(theta)
        return h + h2

    def _validate(self):
        if self.form == "tabulated":
            p = self.params
            s = p["h"] + p["d2h"]
            bad = np.flatnonzero(s <= 0)
            if bad.size:
                raise CurveInvalidError(
                    f"h + h'' = {s[bad[0]]:.3g} <= 0 at theta = {p['theta'][bad[0]]:.6g}: "
                    "not a regular strictly convex curve")

    # geometry -------------------------------------------------------------
    def in_arc(self, theta: float) -> bool:
        if self.arc is None:
            return True
        a0, a1 = self.arc
        t = (theta - a0) % TWO_PI + a0
        return t <= a1 + 1e-12

    def point(self, theta) -> np.ndarray:
        h, h1, _ = self.derivatives(theta)
        return np.exp(1j * np.asarray(theta)) * (h + 1j * h1)

    def length(self, t0: float, t1: float, m: int = 257) -> float:
        """Arc length between normal angles ``t0 <= t1``."""
        if t1 <= t0:
            return 0.0
        from scipy.integrate import simpson
        t = np.linspace(t0, t1, m)
        return float(simpson(self.speed(t), x=t))

    def perimeter(self) -> float:
        if self.arc is None:
            return self.length(0.0, TWO_PI, 4097)
        return self.length(*self.arc, m=4097)

    def polygon(self, m: int = 2048) -> geometry.Polygon:
        return geometry.Polygon(self.point(TWO_PI * np.arange(m) / m))

    def __repr__(self):
        if self.form == "tabulated":
            desc = f"{self.params['theta'].size} samples"
        else:
            desc = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"ConvexAnalyticCurve.{self.form}({desc})"


def parse_curve(descriptor: str) -> ConvexAnalyticCurve:
    """Parse ``circle:<r>[:<cx>,<cy>]``, ``ellipse:<a>:<b>[:<cx>,<cy>[:<rot>]]``
    or ``tabulated:<file>`` (CSV with header ``theta,h,dh,d2h``)."""
    parts = descriptor.split(":")
    try:
        if parts[0] == "circle" and 2 <= len(parts) <= 3:
            c = _parse_point(parts[2]) if len(parts) == 3 else 0j
            return ConvexAnalyticCurve.circle(float(parts[1]), c)
        if parts[0] == "ellipse" and 3 <= len(parts) <= 5:
            c = _parse_point(parts[3]) if len(parts) >= 4 else 0j
            rot = float(parts[4]) if len(parts) == 5 else 0.0
            return ConvexAnalyticCurve.ellipse(float(parts[1]), float(parts[2]), c, rot)
        if parts[0] == "tabulated" and len(parts) >= 2:
            return read_tabulated(":".join(parts[1:]))
    except ValueError as exc:
        if isinstance(exc, (CurveInvalidError, PreconditionError)):
            raise
        raise PreconditionError(f"bad curve descriptor {descriptor!r}: {exc}") from exc
    raise PreconditionError(f"cannot parse curve descriptor {descriptor!r}")


def _parse_point(text: str) -> complex:
    x, sep, y = text.partition(",")
    if not sep:
        raise PreconditionError(f"expected x,y but got {text!r}")
    return complex(float(x), float(y))


def read_tabulated(path) -> ConvexAnalyticCurve:
    try:
        with open(Path(path), newline="") as fh:
            rows = list(csv.DictReader(fh))
        cols = {k: [float(r[k]) for r in rows] for k in ("theta", "h", "dh", "d2h")}
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise PreconditionError(f"cannot read tabulated curve {path}: {exc}") from exc
    return ConvexAnalyticCurve.tabulated(cols["theta"], cols["h"], cols["dh"], cols["d2h"])


def curve_point(curve: ConvexAnalyticCurve, theta: float) -> complex:
    """``gamma(theta) = exp(i theta) (h + i h')``."""
    _require_regular(curve, theta)
    return complex(curve.point(theta))


def curve_tangent(curve: ConvexAnalyticCurve, theta: float) -> complex:
    """Unit tangent ``i exp(i theta)`` in the direction of increasing theta."""
    _require_regular(curve, theta)
    return complex(1j * np.exp(1j * theta))


def _require_regular(curve, theta):
    if not curve.in_arc(theta):
        raise PreconditionError(f"theta={theta:.6g} lies outside the curve's arc")
    s = float(curve.speed(theta))
    if s <= 0:
        raise CurveInvalidError(f"h + h'' = {s:.3g} <= 0 at theta={theta:.6g}")


def tangent_meets_region(curve: ConvexAnalyticCurve, theta: float, region, tol: float = 0.0) -> bool:
    """Whether the tangent line of ``curve`` with normal angle ``theta`` meets ``region``.

    The line ``Re(exp(-i theta) z) = h(theta)`` meets a compact convex set iff
    ``h`` lies between the set's lowest and highest values of that functional.
    ``tol`` widens the band on both sides.
    """
    if not curve.in_arc(theta):
        raise PreconditionError(f"theta={theta:.6g} lies outside the curve's arc")
    h = float(curve.h(theta))
    hi = float(region.support([theta])[0])
    lo = -float(region.support([theta + math.pi])[0])
    return lo - tol <= h <= hi + tol


@dataclass
class IntersectionReport:
    """How the boundary of cl W(A) meets a curve.

    ``coincidence_arcs`` holds ``(theta_start, theta_end, length, at_arc_end)``
    where ``at_arc_end`` marks arcs running into an endpoint of a curve
    restricted to a sub-arc.
    """

    isolated_touches: list[tuple[float, complex]]
    coincidence_arcs: list[tuple[float, float, float, bool]]
    max_gap_on_arc: float
    verdict: str
    min_gap: float = 0.0
    tol: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def touch_count(self) -> int:
        return len(self.isolated_touches)

    @property
    def coincidence_total_length(self) -> float:
        return float(sum(a[2] for a in self.coincidence_arcs))

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "touch_count": self.touch_count,
            "isolated_touches": [[t, [p.real, p.imag]] for t, p in self.isolated_touches],
            "coincidence_arcs": [list(a) for a in self.coincidence_arcs],
            "coincidence_total_length": self.coincidence_total_length,
            "max_gap_on_arc": self.max_gap_on_arc,
            "min_gap": self.min_gap,
            "tol": self.tol,
        }


def _point_gaps(curve: ConvexAnalyticCurve, points) -> np.ndarray:
    """Distance from points of ``cl D`` to the curve, ``min_t h(t) - Re(e^{-it} p)``.

    A 1024-direction scan brackets the minimiser, a 65-point local scan
    narrows it, and a parabola through the best three values finishes.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    out = np.empty(pts.size)
    m = 1024
    coarse = TWO_PI * np.arange(m) / m
    h_coarse = curve.support(coarse)
    step = TWO_PI / m
    local = np.linspace(-step, step, 65)
    for s0 in range(0, pts.size, 2048):
        p = pts[s0:s0 + 2048]
        f = h_coarse[None, :] - (np.exp(-1j * coarse)[None, :] * p[:, None]).real
        t = coarse[np.argmin(f, axis=1)]
        tt = t[:, None] + local[None, :]
        g = curve.support(tt.ravel()).reshape(tt.shape) - (np.exp(-1j * tt) * p[:, None]).real
        j = np.clip(np.argmin(g, axis=1), 1, local.size - 2)
        r = np.arange(p.size)
        gm, g0, gp = g[r, j - 1], g[r, j], g[r, j + 1]
        denom = gm - 2 * g0 + gp
        with np.errstate(divide="ignore", invalid="ignore"):
            vertex = np.where(denom > 0, g0 - (gp - gm) ** 2 / (8 * denom), g0)
        out[s0:s0 + 2048] = np.minimum(np.minimum(vertex, g0), f.min(axis=1))
    return out


def _runs(mask: np.ndarray, cyclic: bool) -> list[np.ndarray]:
    """Maximal runs of True as index arrays, merged across the wrap if cyclic."""
    m = mask.size
    if not mask.any():
        return []
    if mask.all():
        return [np.arange(m)]
    idx = np.flatnonzero(mask)
    splits = np.flatnonzero(np.diff(idx) > 1) + 1
    runs = np.split(idx, splits)
    if cyclic and len(runs) > 1 and runs[0][0] == 0 and runs[-1][-1] == m - 1:
        runs[0] = np.concatenate([runs[-1], runs[0]])
        runs.pop()
    return runs


def _linked_runs(mask: np.ndarray, linked: np.ndarray) -> list[np.ndarray]:
    """Runs of True entries where ``linked[i]`` joins entry ``i`` to ``i + 1`` (cyclically)."""
    m = mask.size
    if not mask.any():
        return []
    joins = mask & np.roll(mask, -1) & linked
    breaks = np.flatnonzero(~joins)
    if breaks.size == 0:
        return [np.arange(m)]
    start = (breaks[0] + 1) % m
    order = np.roll(np.arange(m), -start)
    runs, cur = [], []
    for i in order:
        if mask[i]:
            cur.append(i)
        if not joins[i]:
            if cur:
                runs.append(np.array(cur))
            cur = []
    if cur:
        runs.append(np.array(cur))
    return runs


def intersect_boundary(B: NumericalRangeBoundary, curve: ConvexAnalyticCurve,
                       tol: float | None = None, min_arc_length: float | None = None
                       ) -> IntersectionReport:
    """Locate touches and coincidence arcs of ``cl W(A)`` with ``curve``.

    ``d(theta) = h(theta) - mu(theta)`` must stay above ``-tol`` (otherwise
    :class:`ContainmentError`).  A coincidence arc is a maximal run of
    directions where ``d <= tol`` and the boundary point is within ``tol`` of
    the curve, provided its length reaches ``min_arc_length`` (default ten
    sample spacings of curve length).  Remaining runs of boundary points within
    ``tol`` of the curve are isolated touches, one per run at the closest point.
    """
    scale = B.scale
    tol = 1e-6 * scale if tol is None else float(tol)
    th_all = B.thetas
    keep = np.array([curve.in_arc(t) for t in th_all])
    samples = [s for s, k in zip(B.samples, keep) if k]
    if not samples:
        raise PreconditionError("no sweep direction falls inside the curve's arc")
    th = np.array([s.theta for s in samples])
    if curve.arc is not None:
        order = np.argsort((th - curve.arc[0]) % TWO_PI)
        samples = [samples[i] for i in order]
        th = (th[order] - curve.arc[0]) % TWO_PI + curve.arc[0]
    mu = np.array([s.mu for s in samples])
    d = curve.support(th) - mu
    worst = float(d.min())
    if worst < -tol:
        i = int(np.argmin(d))
        raise ContainmentError(
            f"W(A) not inside cl D: support exceeds the curve by {-worst:.3g} at theta={th[i]:.6g}",
            -worst)

    lo_pts = np.array([s.boundary[0] for s in samples])
    hi_pts = np.array([s.boundary[1] for s in samples])
    uniq, inv = np.unique(np.concatenate([lo_pts, hi_pts]), return_inverse=True)
    gaps = _point_gaps(curve, uniq)
    cache = dict(zip(uniq.tolist(), gaps.tolist()))
    dist = np.minimum(gaps[inv[:len(samples)]], gaps[inv[len(samples):]])

    cyclic = curve.arc is None
    spacing = np.diff(np.concatenate([th, [th[0] + TWO_PI]])) if cyclic else np.diff(th)
    if min_arc_length is None:
        med = float(np.median(spacing)) if spacing.size else TWO_PI
        min_arc_length = 10.0 * med * float(np.min(curve.speed(th)))

    arc_mask = (d <= tol) & (dist <= tol)
    arcs = []
    in_arc = np.zeros(len(samples), dtype=bool)
    for run in _runs(arc_mask, cyclic):
        if run.size == len(samples) and cyclic:
            t0, t1 = float(th[0]), float(th[0] + TWO_PI)
            length = curve.length(t0, t1, 4097)
        else:
            t0 = float(th[run[0]])
            t1 = float(th[run[-1]])
            if t1 < t0:
                t1 += TWO_PI
            length = curve.length(t0, t1, 513)
        if length >= min_arc_length and run.size >= 2:
            at_end = (not cyclic) and (run[0] == 0 or run[-1] == len(samples) - 1)
            arcs.append((t0, t1, length, bool(at_end)))
            in_arc[run] = True

    # touching boundary points are grouped along the boundary: copies that
    # differ by rounding merge, and neighbours in boundary order stay in one
    # touch while the chord between them hugs the curve within tol
    cand = []
    for k, smp in enumerate(samples):
        if in_arc[k]:
            continue
        for p in dict.fromkeys(smp.boundary):
            if cache[p] <= tol:
                cand.append((k, p, cache[p]))
    touches = []
    if cand:
        centre = complex(np.mean(B.polygon.vertices))
        merge = 1e-10 * scale
        cand.sort(key=lambda c: math.atan2((c[1] - centre).imag, (c[1] - centre).real))
        reps: list[list] = []
        for c in cand:
            if reps and abs(c[1] - reps[-1][0][1]) <= merge:
                reps[-1].append(c)
            else:
                reps.append([c])
        if len(reps) > 1 and abs(reps[0][0][1] - reps[-1][0][1]) <= merge:
            reps[0].extend(reps.pop())
        heads = np.array([r[0][1] for r in reps])
        m = heads.size
        if m > 1:
            mids = 0.5 * (heads + np.roll(heads, -1))
            linked = _point_gaps(curve, mids) <= tol
        else:
            linked = np.zeros(1, dtype=bool)
        for run in _linked_runs(np.ones(m, dtype=bool), linked):
            best = min((c for i in run for c in reps[i]), key=lambda c: c[2])
            touches.append((float(th[best[0]] % TWO_PI), complex(best[1])))
    touches.sort(key=lambda x: x[0])

    gap_on_arc = float(np.max(np.maximum(d[in_arc], dist[in_arc]))) if in_arc.any() else 0.0
    verdict = "coincidence" if arcs else ("finite-touch" if touches else "disjoint")
    return IntersectionReport(touches, arcs, gap_on_arc, verdict, float(max(worst, 0.0)), tol,
                              {"min_arc_length": float(min_arc_length)})


def anderson_check(A, curve: ConvexAnalyticCurve, tol: float | None = None, *, grid: int = 512,
                   refine: bool = True, tol_fill: float | None = None,
                   boundary: NumericalRangeBoundary | None = None) -> dict:
    """Anderson-type fill test of ``cl W(A)`` against a closed curve.

    Returns ``{n, touch_count, coincidence_total_length, hausdorff, verdict,
    conclusion, inconsistent}``.  ``conclusion`` is ``filled`` when the
    Hausdorff distance to the region is within ``tol_fill`` (default
    ``1e-4 * scale``), ``disjoint`` when nothing touches, and
    ``anderson-consistent`` otherwise.  In finite dimension a range that meets
    a regular analytic curve along an arc must fill its region, and for a
    circle more than ``n`` touches force the same; ``inconsistent`` flags a
    violation of either.
    """
    if curve.arc is not None:
        raise PreconditionError("anderson_check needs a closed curve")
    A = np.asarray(A, dtype=complex)
    B = boundary if boundary is not None else boundary_sweep(A, grid=grid, refine=refine)
    scale = B.scale
    tol_fill = 1e-4 * scale if tol_fill is None else tol_fill
    rep = intersect_boundary(B, curve, tol)
    dist = geometry.hausdorff(B.polygon, curve)
    filled = dist <= tol_fill
    n = int(A.shape[0])
    if filled:
        conclusion = "filled"
    elif rep.verdict == "disjoint":
        conclusion = "disjoint"
    else:
        conclusion = "anderson-consistent"
    inconsistent = not filled and (bool(rep.coincidence_arcs)
                                   or (curve.form == "circle" and rep.touch_count > n))
    return {
        "n": n,
        "touch_count": rep.touch_count,
        "coincidence_total_length": rep.coincidence_total_length,
        "hausdorff": float(dist),
        "verdict": rep.verdict,
        "conclusion": conclusion,
        "inconsistent": bool(inconsistent),
        "report": rep,
    }


def theorem4_experiment(family: OperatorFamily, curve: ConvexAnalyticCurve, schedule=None, *,
                        grid: int = 256, tol: float | None = None) -> dict:
    """Check the hypotheses and conclusion of the fill theorem at finite scale.

    The tangent test uses the essential-range estimate widened by its own
    resolution.  Failures of hypotheses are recorded in the result, never
    raised.
    """
    from .essrange import DEFAULT_SCHEDULE
    schedule = DEFAULT_SCHEDULE if schedule is None else schedule
    est = ess_range_estimate(family, schedule, grid=grid)
    region = est.intersection if est.intersection is not None else est.polygons[-1]
    if curve.arc is None:
        dirs = TWO_PI * np.arange(grid) / grid
    else:
        dirs = np.linspace(curve.arc[0], curve.arc[1], grid)
    meets = np.array([tangent_meets_region(curve, t, region, est.resolution) for t in dirs])
    failures = []
    if meets.any():
        first = float(dirs[np.flatnonzero(meets)[0]])
        failures.append(f"tangent lines meet the essential range estimate "
                        f"({int(meets.sum())} of {dirs.size} directions, first at theta={first:.6g})")
    N = max(Nw for _, Nw in est.sections)
    B = boundary_sweep(truncate(family, N), grid=grid)
    report = None
    contained = True
    try:
        report = intersect_boundary(B, curve, tol)
    except ContainmentError as exc:
        contained = False
        failures.append(f"section {N} is not inside cl D (excess {exc.excess:.3g})")
    conclusion = None
    if report is not None and report.coincidence_arcs:
        worst = 0.0
        for t0, t1, _, _ in report.coincidence_arcs:
            t = np.linspace(t0, t1, 257)
            worst = max(worst, float(np.max(np.abs(curve.support(t) - B.support(t)))))
        conclusion = worst <= report.tol
    return {
        "family": family.describe(),
        "section": N,
        "tangent_meets": bool(meets.any()),
        "tangent_meets_theta0": bool(tangent_meets_region(curve, 0.0, region, est.resolution))
        if curve.in_arc(0.0) else None,
        "meeting_fraction": float(meets.mean()),
        "contained": contained,
        "hypotheses_hold": not failures,
        "hypothesis_failures": failures,
        "verdict": report.verdict if report is not None else None,
        "conclusion_holds": conclusion,
        "estimate": est,
        "report": report,
    }


@dataclass(frozen=True)
class SubSegment:
    """Part of a segment inside cl W(A); ``None`` endpoints mean empty.

    Only the closure is computed, so whether the endpoints are attained by
    ``W(A)`` itself is left undecided.
    """

    start: complex | None
    end: complex | None
    t0: float | None
    t1: float | None
    attainment: str = "undecided"

    @property
    def empty(self) -> bool:
        return self.start is None


def segment_coincidence(B: NumericalRangeBoundary, p: complex, q: complex,
                        tol: float = 1e-9) -> SubSegment:
    """Maximal closed sub-segment of ``[p, q]`` inside cl W(A).

    The violation ``max_theta Re(e^{-i theta} z(t)) - mu(theta)`` is convex in
    the segment parameter ``t``; its minimiser seeds two bisections that run
    until the bracket is below ``tol`` in length.
    """
    p, q = complex(p), complex(q)
    if p == q:
        raise PreconditionError("segment endpoints must differ")
    th, mus = B.thetas, B.mus
    rot = np.exp(-1j * th)

    def viol(t: float) -> float:
        z = p + t * (q - p)
        return float(np.max((rot * z).real - mus))

    def inside(t: float) -> bool:
        return contains_point(B, p + t * (q - p), tol)

    grid = np.linspace(0.0, 1.0, 257)
    vals = np.array([viol(t) for t in grid])
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(viol, bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
    t_in = float(res.x) if res.fun < vals[i] else float(grid[i])
    if not inside(t_in):
        return SubSegment(None, None, None, None)
    step = tol / abs(q - p)

    def edge(a: float, b: float) -> float:
        # a inside, b candidate outside; returns the last inside parameter
        if inside(b):
            return b
        while abs(b - a) > step:
            m = 0.5 * (a + b)
            if inside(m):
                a = m
            else:
                b = m
        return a

    t0 = edge(t_in, 0.0)
    t1 = edge(t_in, 1.0)
    return SubSegment(p + t0 * (q - p), p + t1 * (q - p), t0, t1)
