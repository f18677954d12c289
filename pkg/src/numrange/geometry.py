"""Planar convex geometry on complex numbers.

Convex sets are compared through their support functions
``h_K(theta) = max_{z in K} Re(exp(-i theta) z)``; the Hausdorff distance of
two compact convex sets is ``max_theta |h_K - h_L|``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize_scalar

TWO_PI = 2.0 * math.pi


def wrap(theta):
    """Map angles into ``[0, 2 pi)``."""
    return np.mod(theta, TWO_PI)


def _cross(o, a, b) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points, tol: float | None = None) -> np.ndarray:
    """Counterclockwise hull vertices (monotone chain), collinear points dropped.

    Turns with cross product at most ``tol`` (default ``1e-15 * scale^2``,
    ``scale = 1 + max |z|``) count as straight, which also merges points that
    differ only by rounding.  Degenerate inputs give one vertex (a point) or
    two (a segment).
    """
    pts = np.unique(np.asarray(points, dtype=complex).ravel())
    if pts.size <= 1:
        return pts
    if tol is None:
        tol = 1e-15 * (1.0 + float(np.max(np.abs(pts)))) ** 2
    if pts.size == 2:
        return pts if abs(pts[1] - pts[0]) > math.sqrt(tol) else pts[:1]
    order = np.lexsort((pts.imag, pts.real))
    pts = pts[order]
    lower: list[complex] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= tol:
            lower.pop()
        lower.append(p)
    upper: list[complex] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= tol:
            upper.pop()
        upper.append(p)
    hull = np.array(lower[:-1] + upper[:-1], dtype=complex)
    if hull.size == 0 or (hull.size == 2 and abs(hull[1] - hull[0]) <= math.sqrt(tol)):
        return pts[:1]
    return hull


def support_of_points(points, thetas) -> np.ndarray:
    """``max_k Re(exp(-i theta) z_k)`` for every theta (brute force, chunked)."""
    pts = np.asarray(points, dtype=complex).ravel()
    th = np.atleast_1d(np.asarray(thetas, dtype=float))
    out = np.empty(th.shape)
    step = max(1, 2_000_000 // max(pts.size, 1))
    for s in range(0, th.size, step):
        rot = np.exp(-1j * th[s:s + step])
        out[s:s + step] = np.max((rot[:, None] * pts[None, :]).real, axis=1)
    return out


class Polygon:
    """Compact convex polygon (possibly a segment or a point)."""

    def __init__(self, points, hull: bool = True):
        self.vertices = convex_hull(points) if hull else np.asarray(points, dtype=complex)
        self._cum = None
        if self.vertices.size == 0:
            raise ValueError("empty polygon")

    def __len__(self):
        return self.vertices.size

    def __repr__(self):
        return f"Polygon({self.vertices.size} vertices)"

    @property
    def empty(self) -> bool:
        return False

    def support(self, thetas) -> np.ndarray:
        v = self.vertices
        th = np.atleast_1d(np.asarray(thetas, dtype=float))
        if v.size < 8:
            return support_of_points(v, th)
        if self._cum is None:
            a = np.angle(-1j * (np.roll(v, -1) - v))
            inc = wrap(np.diff(a))
            self._cum = a[0] + np.concatenate([[0.0], np.cumsum(inc)])
        cum = self._cum
        t = wrap(th - cum[0]) + cum[0]
        j = np.searchsorted(cum, t, side="right") - 1
        m = v.size
        rot = np.exp(-1j * th)
        cand = [(rot * v[(j + k) % m]).real for k in (0, 1, 2)]
        return np.maximum(np.maximum(cand[0], cand[1]), cand[2])

    def kinks(self) -> np.ndarray:
        """Outward edge-normal angles, where the support function bends."""
        v = self.vertices
        if v.size == 1:
            return np.zeros(0)
        edges = np.roll(v, -1) - v
        if v.size == 2:
            edges = edges[:1]
            normals = np.array([-1j * edges[0], 1j * edges[0]])
        else:
            normals = -1j * edges
        return wrap(np.angle(normals))

    def halfplanes(self) -> list[tuple[complex, float]]:
        """``(unit normal u, offset c)`` pairs with the set ``= {Re(conj(u) z) <= c}``."""
        v = self.vertices
        if v.size >= 3:
            out = []
            for a, b in zip(v, np.roll(v, -1)):
                if b == a:
                    continue
                u = -1j * (b - a) / abs(b - a)
                out.append((u, float((np.conj(u) * a).real)))
            return out
        if v.size == 2:
            t = (v[1] - v[0]) / abs(v[1] - v[0])
        else:
            t = 1.0 + 0j
        dirs = [t, -t, 1j * t, -1j * t]
        return [(u, float(np.max((np.conj(u) * v).real))) for u in dirs]

    def contains(self, z, tol: float = 0.0) -> bool:
        return all((np.conj(u) * z).real <= c + tol for u, c in self.halfplanes())

    def area(self) -> float:
        v = self.vertices
        if v.size < 3:
            return 0.0
        w = np.roll(v, -1)
        return 0.5 * float(np.sum(v.real * w.imag - w.real * v.imag))

    def diameter(self) -> float:
        v = self.vertices
        return float(np.max(np.abs(v[:, None] - v[None, :])))


class Disk:
    """Closed disk, used for exact oracle regions."""

    def __init__(self, center: complex = 0.0, radius: float = 1.0):
        self.center = complex(center)
        self.radius = float(radius)

    def __repr__(self):
        return f"Disk({self.center}, {self.radius})"

    empty = False

    def support(self, thetas) -> np.ndarray:
        th = np.asarray(thetas, dtype=float)
        return self.radius + (np.exp(-1j * th) * self.center).real

    def kinks(self) -> np.ndarray:
        return np.zeros(0)

    def polygon(self, m: int = 1024) -> Polygon:
        # circumscribed regular polygon keeps the disk inside
        r = self.radius / math.cos(math.pi / m)
        ang = TWO_PI * np.arange(m) / m
        return Polygon(self.center + r * np.exp(1j * ang))

    def contains(self, z, tol: float = 0.0) -> bool:
        return abs(z - self.center) <= self.radius + tol


def clip(vertices, normal: complex, offset: float, tol: float = 0.0) -> np.ndarray:
    """Clip a convex vertex cycle to ``Re(conj(normal) z) <= offset``."""
    v = np.asarray(vertices, dtype=complex)
    if v.size == 0:
        return v
    s = (np.conj(normal) * v).real - offset
    inside = s <= tol
    if inside.all():
        return v
    if not inside.any():
        return v[:0]
    if v.size == 1:
        return v
    out = []
    n = v.size
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        sa, sb = s[i], s[(i + 1) % n]
        if sa <= tol:
            out.append(a)
        if (sa <= tol) != (sb <= tol):
            t = sa / (sa - sb)
            out.append(a + t * (b - a))
    out = np.array(out, dtype=complex)
    # drop consecutive duplicates
    keep = np.abs(out - np.roll(out, 1)) > 0
    if not keep.any():
        return out[:1]
    return out[keep]


def intersect(P: Polygon, Q: Polygon, tol: float = 0.0) -> Polygon | None:
    """Intersection of two convex polygons, ``None`` when numerically empty."""
    if len(Q) < 3 <= len(P):
        P, Q = Q, P
    v = P.vertices
    if v.size == 2:
        v = np.array([v[0], v[1]])
    for u, c in Q.halfplanes():
        v = clip(v, u, c, tol)
        if v.size == 0:
            return None
    return Polygon(v)


def _candidate_thetas(sets, n_grid: int) -> np.ndarray:
    base = TWO_PI * np.arange(n_grid) / n_grid
    parts = [base]
    for K in sets:
        k = K.kinks()
        if k.size:
            parts.extend([k, k - 1e-9, k + 1e-9])
    return np.unique(wrap(np.concatenate(parts)))


def support_distance(K, L, n_grid: int = 4096) -> tuple[float, float]:
    """``(max_theta |h_K - h_L|, argmax theta)`` with local refinement."""
    th = _candidate_thetas([K, L], n_grid)

    def f(t):
        return abs(float(K.support([t])[0] - L.support([t])[0]))

    vals = np.abs(K.support(th) - L.support(th))
    best_i = int(np.argmax(vals))
    best, best_t = float(vals[best_i]), float(th[best_i])
    # refine the strongest local maxima inside their bracketing samples
    idx = np.argsort(vals)[::-1][:8]
    m = th.size
    for i in idx:
        lo = th[i - 1] if i > 0 else th[-1] - TWO_PI
        hi = th[i + 1] if i < m - 1 else th[0] + TWO_PI
        if hi - lo <= 0:
            continue
        res = minimize_scalar(lambda t: -f(t), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        if -res.fun > best:
            best, best_t = float(-res.fun), float(wrap(res.x))
    return best, best_t


def hausdorff(K, L, n_grid: int = 4096) -> float:
    """Hausdorff distance of two compact convex sets via support functions."""
    return support_distance(K, L, n_grid)[0]


def is_convex_cycle(points, tol: float) -> bool:
    """All turns of a closed vertex cycle are counterclockwise up to ``-tol``."""
    p = np.asarray(points, dtype=complex)
    if p.size < 3:
        return True
    e1 = np.roll(p, -1) - p
    e2 = np.roll(e1, -1)
    cross = e1.real * e2.imag - e1.imag * e2.real
    return bool(np.all(cross >= -tol))
