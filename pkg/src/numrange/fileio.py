"""Matrix files, sweep CSV and SVG output.

A matrix file is the JSON document ``{"n": n, "entries": rows}`` where each
row holds ``n`` pairs ``[re, im]``.  Python's float ``repr`` is the shortest
decimal that round-trips, so writing then reading is bit-exact.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionError, PreconditionError


def matrix_to_json(A) -> str:
    A = np.asarray(A, dtype=complex)
    rows = [[[float(z.real), float(z.imag)] for z in row] for row in A]
    return json.dumps({"n": int(A.shape[0]), "entries": rows}, separators=(",", ":"))


def matrix_from_obj(doc) -> np.ndarray:
    """Validate a decoded matrix document and return the matrix."""
    if not isinstance(doc, dict) or "n" not in doc or "entries" not in doc:
        raise PreconditionError('matrix document needs keys "n" and "entries"')
    n = doc["n"]
    rows = doc["entries"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DimensionError(f"n must be a positive integer, got {n!r}")
    if not isinstance(rows, list) or len(rows) != n:
        raise DimensionError(f"expected {n} rows")
    A = np.empty((n, n), dtype=complex)
    for j, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise DimensionError(f"row {j} must have {n} entries")
        for k, pair in enumerate(row):
            if not isinstance(pair, list) or len(pair) != 2:
                raise PreconditionError(f"entry ({j},{k}) must be a [re, im] pair")
            re, im = pair
            if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
                raise PreconditionError(f"entry ({j},{k}) is not numeric")
            if not (math.isfinite(re) and math.isfinite(im)):
                raise PreconditionError(f"entry ({j},{k}) is not finite")
            A[j, k] = complex(re, im)
    return A


def matrix_from_json(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"invalid JSON: {exc}") from exc
    return matrix_from_obj(doc)


def read_matrix(path) -> np.ndarray:
    return matrix_from_json(Path(path).read_text())


def write_matrix(path, A) -> None:
    Path(path).write_text(matrix_to_json(A) + "\n")


def fmt(x: float) -> str:
    """17 significant digits, the CSV number format (negative zero printed as 0)."""
    return "%.17g" % (float(x) + 0.0)


def sweep_csv(boundary) -> str:
    """``theta,mu,multiplicity,px,py,flat`` rows, two per flat sample."""
    lines = ["theta,mu,multiplicity,px,py,flat"]
    for s in sorted(boundary.samples, key=lambda s: s.theta):
        flat = int(s.boundary[0] != s.boundary[1])
        points = s.boundary if flat else s.boundary[:1]
        for p in points:
            lines.append(",".join([fmt(s.theta), fmt(s.mu), str(s.multiplicity),
                                   fmt(p.real), fmt(p.imag), str(flat)]))
    return "\n".join(lines) + "\n"


def svg(layers: list[tuple[str, np.ndarray, bool]], size: int = 480) -> str:
    """Plain SVG of closed or open polylines.

    ``layers`` holds ``(css colour, complex points, closed)``; the viewBox is
    fitted to all points with a 5 percent margin and the y axis points up.
    """
    pts = [np.asarray(p, dtype=complex).ravel() for _, p, _ in layers if np.size(p)]
    allp = np.concatenate(pts) if pts else np.zeros(1, dtype=complex)
    x0, x1 = float(allp.real.min()), float(allp.real.max())
    y0, y1 = float(allp.imag.min()), float(allp.imag.max())
    span = max(x1 - x0, y1 - y0, 1e-12)
    pad = 0.05 * span
    x0, y0, span = x0 - pad, y0 - pad, span + 2 * pad
    width = span / size
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="{fmt(x0)} {fmt(-(y0 + span))} {fmt(span)} {fmt(span)}">']
    for colour, p, closed in layers:
        p = np.asarray(p, dtype=complex).ravel()
        if p.size == 0:
            continue
        if p.size == 1:
            out.append(f'<circle cx="{fmt(p[0].real)}" cy="{fmt(-p[0].imag)}" r="{fmt(3 * width)}" '
                       f'fill="{colour}"/>')
            continue
        coords = " ".join(f"{fmt(z.real)},{fmt(-z.imag)}" for z in p)
        tag = "polygon" if closed else "polyline"
        out.append(f'<{tag} points="{coords}" fill="none" stroke="{colour}" '
                   f'stroke-width="{fmt(1.5 * width)}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
