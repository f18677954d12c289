"""Closure of the numerical range as an intersection of half-planes.

For every direction ``theta`` the support value ``mu(theta)`` is the top
eigenvalue of ``Re(exp(-i theta) A)``; the support line
``{z : Re(exp(-i theta) z) = mu(theta)}`` touches ``cl W(A)`` in a point
(simple top eigenvalue) or a flat segment (degenerate top eigenvalue).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .linalg import as_matrix, hermitian_eig, hermitian_eigvals, imag_part, norm2, real_part, rotate, top_eigenspace

TWO_PI = geometry.TWO_PI


def default_degeneracy_tol(A) -> float:
    return 1e-8 * (1.0 + norm2(A))


@dataclass(frozen=True)
class SupportSample:
    """One direction of the sweep.

    ``boundary`` is ``(p_minus, p_plus)``, ordered by increasing
    ``Im(exp(-i theta) z)``; both entries coincide for a boundary point.
    """

    theta: float
    mu: float
    multiplicity: int
    top_vectors: np.ndarray
    gap: float
    boundary: tuple[complex, complex]

    @property
    def flat(self) -> bool:
        return self.multiplicity > 1

    @property
    def point(self) -> complex:
        """Boundary point, or the midpoint of the flat segment."""
        return 0.5 * (self.boundary[0] + self.boundary[1])


@dataclass(frozen=True)
class FlatSegment:
    theta: float
    start: complex
    end: complex

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


@dataclass
class NumericalRangeBoundary:
    """Sweep result: samples sorted by theta and the counterclockwise polyline."""

    samples: list[SupportSample]
    polyline: np.ndarray
    flat_segments: list[FlatSegment]
    norm: float = 0.0
    _polygon: geometry.Polygon | None = field(default=None, repr=False)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([s.theta for s in self.samples])

    @property
    def mus(self) -> np.ndarray:
        return np.array([s.mu for s in self.samples])

    @property
    def scale(self) -> float:
        return 1.0 + float(np.max(np.abs(self.polyline)))

    @property
    def polygon(self) -> geometry.Polygon:
        if self._polygon is None:
            self._polygon = geometry.Polygon(self.polyline)
        return self._polygon

    def support(self, thetas) -> np.ndarray:
        return self.polygon.support(thetas)

    def kinks(self) -> np.ndarray:
        return self.polygon.kinks()


def _sample(A: np.ndarray, theta: float, tol: float) -> SupportSample:
    H = real_part(rotate(A, theta))
    values, V = top_eigenspace(H, tol, check=False)
    n = values.size
    m = V.shape[1]
    mu = float(values[-1])
    gap = mu - float(values[n - m - 1]) if m < n else 0.0
    sample = SupportSample(theta, mu, m, V, gap, (0j, 0j))
    return SupportSample(theta, mu, m, V, gap, boundary_on_line(A, sample))


def support_value(A, theta: float, degeneracy_tol: float | None = None) -> SupportSample:
    """Support value, top eigenspace and boundary piece in direction ``theta``."""
    A = as_matrix(A)
    tol = default_degeneracy_tol(A) if degeneracy_tol is None else degeneracy_tol
    if tol <= 0:
        raise ValueError("degeneracy_tol must be positive")
    return _sample(A, float(theta), tol)


def boundary_on_line(A, sample: SupportSample) -> tuple[complex, complex]:
    """Boundary of ``cl W(A)`` on the support line of ``sample``.

    A simple top eigenvalue gives the Rayleigh quotient of its eigenvector.
    A cluster of size m > 1 compresses ``A`` to the top eigenspace,
    ``C = V* A V``, and takes the eigenvectors ``w`` of the extreme eigenvalues
    ``beta_min``, ``beta_max`` of ``Im(exp(-i theta) C)``; the segment ends are
    the Rayleigh quotients of ``V w``.  For an exactly degenerate cluster
    these equal ``exp(i theta) (mu + i beta)``; for a cluster that is only
    degenerate up to the tolerance they stay inside ``W(A)`` rather than being
    pushed onto the support line.
    """
    A = np.asarray(A, dtype=complex)
    V = sample.top_vectors
    if V.shape[1] == 1:
        v = V[:, 0]
        z = complex(np.vdot(v, A @ v))
        return (z, z)
    C = V.conj().T @ A @ V
    E = hermitian_eig(imag_part(rotate(C, sample.theta)), check=False)
    lo, hi = V @ E.vectors[:, 0], V @ E.vectors[:, -1]
    return (complex(np.vdot(lo, A @ lo)), complex(np.vdot(hi, A @ hi)))


def _outer_height(sa: SupportSample, sb: SupportSample) -> float:
    """Distance from the chord to the corner of the two support lines."""
    p, q = sa.boundary[1], sb.boundary[0]
    dtheta = (sb.theta - sa.theta) % TWO_PI
    if abs(q - p) == 0.0 or not (0.0 < dtheta < math.pi):
        return 0.0
    ua, ub = np.exp(1j * sa.theta), np.exp(1j * sb.theta)
    # solve Re(conj(ua) x) = mu_a, Re(conj(ub) x) = mu_b
    M = np.array([[ua.real, ua.imag], [ub.real, ub.imag]])
    x, y = np.linalg.solve(M, [sa.mu, sb.mu])
    corner = complex(x, y)
    t = (q - p) / abs(q - p)
    return abs(((corner - p) * np.conj(t)).imag)


def _assemble(samples: list[SupportSample], norm: float) -> NumericalRangeBoundary:
    samples = sorted(samples, key=lambda s: s.theta)
    pts: list[complex] = []
    flats = []
    for s in samples:
        a, b = s.boundary
        pts.append(a)
        if b != a:
            pts.append(b)
            flats.append(FlatSegment(s.theta, a, b))
    return NumericalRangeBoundary(samples, np.array(pts, dtype=complex), flats, norm)


def boundary_sweep(A, grid: int = 256, refine: bool = False, degeneracy_tol: float | None = None,
                   refine_tol: float | None = None) -> NumericalRangeBoundary:
    """Sweep the support line over a uniform grid of ``grid`` directions.

    With ``refine``, adjacent directions are bisected, worst first, while the
    corner of the two support lines sits more than ``refine_tol`` (default
    ``1e-7 * scale``) off the chord, or while the boundary points are more
    than ``scale / grid`` apart and that corner is not negligible (a long
    chord under a flat corner is an edge of the range and needs no samples).
    At most ``16 * grid`` samples are used.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    A = as_matrix(A)
    norm = norm2(A)
    tol = 1e-8 * (1.0 + norm) if degeneracy_tol is None else degeneracy_tol
    samples = [_sample(A, TWO_PI * k / grid, tol) for k in range(grid)]
    if refine:
        samples = _refine(A, samples, grid, tol, refine_tol)
    return _assemble(samples, norm)


def _refine(A, samples, grid, tol, refine_tol):
    scale = 1.0 + max(max(abs(s.boundary[0]), abs(s.boundary[1])) for s in samples)
    chord_max = scale / grid
    height_max = 1e-7 * scale if refine_tol is None else refine_tol
    budget = 16 * grid

    def badness(sa, sb):
        # the boundary lies between the chord and the corner of the support
        # lines, so a long chord under a negligible corner is a straight edge
        height = _outer_height(sa, sb)
        if height <= 1e-3 * height_max:
            return height / height_max
        chord = abs(sb.boundary[0] - sa.boundary[1])
        return max(chord / chord_max, height / height_max)

    # intervals keyed by (start theta, end theta); end may exceed 2 pi
    heap = []
    ordered = sorted(samples, key=lambda s: s.theta)
    for i, sa in enumerate(ordered):
        sb = ordered[(i + 1) % len(ordered)]
        hi = sb.theta if i + 1 < len(ordered) else sb.theta + TWO_PI
        heapq.heappush(heap, (-badness(sa, sb), sa.theta, hi, i, sa, sb))
    out = list(samples)
    counter = len(ordered)
    while heap and len(out) < budget:
        neg, lo, hi, _, sa, sb = heapq.heappop(heap)
        if -neg <= 1.0:
            break
        mid = 0.5 * (lo + hi)
        if mid - lo < 1e-12:
            continue
        sm = _sample(A, mid % TWO_PI, tol)
        out.append(sm)
        counter += 1
        heapq.heappush(heap, (-badness(sa, sm), lo, mid, counter, sa, sm))
        counter += 1
        heapq.heappush(heap, (-badness(sm, sb), mid, hi, counter, sm, sb))
    return out


def contains_point(B: NumericalRangeBoundary, z: complex, tol: float = 1e-9) -> bool:
    """True iff ``Re(exp(-i theta) z) <= mu(theta) + tol`` for every sample."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    th = B.thetas
    return bool(np.all((np.exp(-1j * th) * z).real <= B.mus + tol))


def numerical_radius(A, grid: int = 256) -> tuple[float, float]:
    """``(max_theta mu(theta), argmax)`` refined by bounded Brent search."""
    from scipy.optimize import minimize_scalar

    A = as_matrix(A)
    th = TWO_PI * np.arange(grid) / grid

    def mu(t):
        return float(hermitian_eigvals(real_part(rotate(A, t)), check=False)[-1])

    vals = np.array([mu(t) for t in th])
    i = int(np.argmax(vals))
    h = TWO_PI / grid
    res = minimize_scalar(lambda t: -mu(t), bounds=(th[i] - h, th[i] + h), method="bounded",
                          options={"xatol": 1e-12})
    if -res.fun >= vals[i]:
        return float(-res.fun), float(res.x % TWO_PI)
    return float(vals[i]), float(th[i])
