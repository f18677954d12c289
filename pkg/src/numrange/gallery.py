"""Named test operators with their known ground truth.

Random items are reproducible across languages: a PCG64 stream seeded with
the given integer yields uniforms ``u`` in ``[0, 1)``, consumed in pairs
``(u1, u2)`` and mapped by Box-Muller to the complex Gaussian
``sqrt(-2 log(1 - u1)) * exp(2 pi i u2) / sqrt(2)`` (unit variance).
Matrices are filled row by row.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .curves import ConvexAnalyticCurve
from .errors import PreconditionError
from .essrange import OperatorFamily, diagonal, unit_shift


@dataclass
class GalleryItem:
    """A constructed operator plus declared truth.

    ``truth`` maps keys such as ``"W"`` and ``"W_ess"`` to exact regions
    (:class:`~numrange.geometry.Polygon`, :class:`~numrange.geometry.Disk`
    or :class:`~numrange.curves.ConvexAnalyticCurve`), ``"tol"`` to the
    Hausdorff tolerance for checking a default sweep, and ``"provenance"``
    to where the truth comes from.
    """

    name: str
    object: np.ndarray | OperatorFamily
    truth: dict = field(default_factory=dict)

    @property
    def is_matrix(self) -> bool:
        return isinstance(self.object, np.ndarray)


def complex_gaussians(seed: int, count: int) -> np.ndarray:
    """``count`` unit-variance complex Gaussians from the documented mapping."""
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(2 * count)
    u1, u2 = u[0::2], u[1::2]
    return np.sqrt(-2.0 * np.log1p(-u1)) * np.exp(2j * math.pi * u2) / math.sqrt(2.0)


def _random(n: int, seed: int) -> np.ndarray:
    # entries of variance 1/n give a spectral norm close to 2
    return complex_gaussians(seed, n * n).reshape(n, n) / math.sqrt(n)


def _random_normal(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    g = complex_gaussians(seed, n * n + n)
    Q, R = np.linalg.qr(g[: n * n].reshape(n, n))
    ph = np.diagonal(R) / np.abs(np.diagonal(R))
    U = Q * ph
    d = g[n * n:]
    return U @ np.diag(d) @ U.conj().T, d


def _jordan(n: int) -> np.ndarray:
    return np.diag(np.ones(n - 1, dtype=complex), 1)


CATALOGUE = {
    "example1": "diagonal operator with entries exp(i/k)",
    "example2-unit-shift": "unilateral shift S e_k = e_{k+1}",
    "example3": "diag(0, 1, i)",
    "example4": "diagonal operator with entries 1, i, i/2, i/3, ...",
    "jordan(n)": "n x n nilpotent Jordan block",
    "roots-of-unity(n)": "diag of the n-th roots of unity",
    "disk2x2(r=1)": "[[0, 2r], [0, 0]]",
    "ellipse2x2(a=sqrt(5)/2, b=1/2)": "[[f, 2b], [0, -f]], f = sqrt(a^2 - b^2)",
    "random-normal(n, seed)": "U diag(d) U* with Gaussian d and Haar-like U",
    "random(n, seed)": "complex Gaussian matrix with entry variance 1/n",
}


def names() -> list[str]:
    return list(CATALOGUE)


def parse_name(text: str) -> tuple[str, list[float]]:
    """Split ``name(1, 2)`` or ``name:1:2`` into the name and numeric arguments."""
    text = text.strip()
    m = re.fullmatch(r"([a-z0-9-]+)\s*\((.*)\)", text)
    if m:
        base, rest = m.group(1), m.group(2)
        args = [a for a in (p.strip() for p in rest.split(",")) if a]
    else:
        base, *args = text.split(":")
    vals = []
    for a in args:
        a = a.split("=", 1)[-1].strip()
        try:
            vals.append(float(a))
        except ValueError as exc:
            raise PreconditionError(f"non-numeric gallery argument {a!r}") from exc
    return base, vals


def _int(v: float, what: str, lo: int = 1) -> int:
    if v != int(v) or v < lo:
        raise PreconditionError(f"{what} must be an integer >= {lo}")
    return int(v)


def build(name: str, params=None) -> GalleryItem:
    """Construct a gallery item.

    ``name`` may carry its arguments (``jordan(5)``, ``random:10:3``);
    ``params`` is an optional sequence of extra positional arguments.
    """
    base, args = parse_name(name)
    if params is not None:
        args = list(args) + [float(p) for p in params]

    def want(k_min: int, k_max: int):
        if not k_min <= len(args) <= k_max:
            raise PreconditionError(f"{base} takes {k_min}..{k_max} arguments, got {len(args)}")

    if base == "example1":
        want(0, 0)
        return GalleryItem(base, diagonal("exp-i-over-k"), {
            "W_ess": geometry.Polygon([1.0]),
            "verdicts": {0.0: "essential"},
            "provenance": "[PAPER] Example 1, diagonal entries exp(i/k)"})
    if base == "example2-unit-shift":
        want(0, 0)
        return GalleryItem(base, unit_shift(), {
            "W": geometry.Disk(0, 1), "W_ess": geometry.Disk(0, 1),
            "provenance": "[PAPER] Example 2 with unit weights"})
    if base == "example3":
        want(0, 0)
        return GalleryItem(base, np.diag([0, 1, 1j]).astype(complex), {
            "W": geometry.Polygon([0, 1, 1j]), "tol": 1e-9,
            "segment": ((0, 2), (0, 1)),
            "provenance": "[PAPER] Example 3, W = conv{0, 1, i}"})
    if base == "example4":
        want(0, 0)
        return GalleryItem(base, diagonal("one-then-i-over-k"), {
            "W": geometry.Polygon([0, 1, 1j]), "W_ess": geometry.Polygon([0.0]),
            "verdicts": {-math.pi / 2: "essential", 0.0: "discrete"},
            "provenance": "[PAPER] Example 4, compact diagonal 1, i/k"})
    if base == "jordan":
        want(1, 1)
        n = _int(args[0], "n")
        return GalleryItem(f"jordan({n})", _jordan(n), {
            "W": geometry.Disk(0, math.cos(math.pi / (n + 1))), "tol": 1e-4,
            "provenance": "[DERIVED] nilpotent Jordan block, disk of radius cos(pi/(n+1))"})
    if base == "roots-of-unity":
        want(1, 1)
        n = _int(args[0], "n")
        roots = np.exp(2j * math.pi * np.arange(n) / n)
        return GalleryItem(f"roots-of-unity({n})", np.diag(roots), {
            "W": geometry.Polygon(roots), "tol": 1e-9, "curve": ConvexAnalyticCurve.circle(),
            "provenance": "[DERIVED] normal matrix, inscribed regular polygon"})
    if base == "disk2x2":
        want(0, 1)
        r = args[0] if args else 1.0
        if r <= 0:
            raise PreconditionError("disk radius must be positive")
        return GalleryItem(f"disk2x2({r:g})", np.array([[0, 2 * r], [0, 0]], dtype=complex), {
            "W": geometry.Disk(0, r), "tol": 1e-4 * (1 + r), "curve": ConvexAnalyticCurve.circle(r),
            "provenance": "[DERIVED] 2x2 nilpotent, disk of radius |a|/2"})
    if base == "ellipse2x2":
        want(0, 2)
        a = args[0] if len(args) > 0 else math.sqrt(5) / 2
        b = args[1] if len(args) > 1 else 0.5
        if not a >= b > 0:
            raise PreconditionError("ellipse2x2 needs semi-axes a >= b > 0")
        f = math.sqrt(a * a - b * b)
        curve = ConvexAnalyticCurve.ellipse(a, b)
        return GalleryItem(f"ellipse2x2({a:g},{b:g})", np.array([[f, 2 * b], [0, -f]], dtype=complex), {
            "W": curve, "tol": 1e-4 * (1 + a), "curve": curve,
            "provenance": "[DERIVED] 2x2 ellipse: foci at the eigenvalues, minor axis |c|"})
    if base == "random-normal":
        want(2, 2)
        n, seed = _int(args[0], "n"), _int(args[1], "seed", 0)
        A, d = _random_normal(n, seed)
        return GalleryItem(f"random-normal({n},{seed})", A, {
            "W": geometry.Polygon(d), "tol": 1e-6 * (1 + float(np.max(np.abs(d)))),
            "provenance": "[DERIVED] normal matrix, W = conv of eigenvalues"})
    if base == "random":
        want(2, 2)
        n, seed = _int(args[0], "n"), _int(args[1], "seed", 0)
        return GalleryItem(f"random({n},{seed})", _random(n, seed), {
            "provenance": "seeded complex Gaussian, no closed-form W"})
    raise PreconditionError(f"unknown gallery item {name!r}; known: {', '.join(names())}")


def matrices(sizes=(3, 5, 8)) -> list[GalleryItem]:
    """Every finite-matrix gallery item at a few representative parameters."""
    items = [build("example3"), build("disk2x2"), build("ellipse2x2")]
    for n in sizes:
        items += [build(f"jordan({n})"), build(f"roots-of-unity({n})"),
                  build(f"random-normal({n},{n})"), build(f"random({n},{n})")]
    return items
