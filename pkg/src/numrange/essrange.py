"""Structured infinite-dimensional operators and essential-range estimates.

An :class:`OperatorFamily` describes an operator on ``l2(N)`` by rules, so any
finite section or compression can be produced on demand.  Indices are
1-based as in the elementary basis ``e_1, e_2, ...``.

The essential numerical range is approximated from compressions to tail
windows ``span{e_n, ..., e_N}``: unit vectors supported far out in the basis
are the computable stand-in for weakly null sequences.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import geometry
from .errors import PreconditionError, UnsupportedError
from .fileio import matrix_from_obj
from .support import boundary_sweep, support_value

DEFAULT_SCHEDULE = ((32, 64), (64, 128), (128, 256), (256, 512))

KINDS = ("diagonal", "weighted-shift", "direct-sum-blocks", "finite-plus-diagonal")


@dataclass(frozen=True)
class ScalarRule:
    """A named scalar sequence ``k -> value`` (``k >= 1``).

    ``limits`` lists the accumulation points of the sequence.  They are
    declared here rather than detected, since finitely many terms never
    determine them.  ``bound`` is ``sup_k |value(k)|``.
    """

    name: str
    func: Callable[[int], complex]
    limits: tuple[complex, ...]
    bound: float

    def __call__(self, k: int) -> complex:
        return self.func(k)

    @property
    def compact(self) -> bool:
        return self.limits == (0j,)


DIAGONAL_RULES = {
    "exp-i-over-k": ScalarRule("exp-i-over-k", lambda k: cmath.exp(1j / k), (1 + 0j,), 1.0),
    "one-then-i-over-k": ScalarRule("one-then-i-over-k",
                                    lambda k: 1 + 0j if k == 1 else 1j / (k - 1), (0j,), 1.0),
    "i-over-k": ScalarRule("i-over-k", lambda k: 1j / k, (0j,), 1.0),
    "zero": ScalarRule("zero", lambda k: 0j, (0j,), 0.0),
}

SHIFT_RULES = {
    "unit": ScalarRule("unit", lambda k: 1 + 0j, (1 + 0j,), 1.0),
}


@dataclass(frozen=True)
class OperatorFamily:
    """Descriptor of a structured bounded operator on ``l2(N)``.

    Exactly the fields relevant to ``kind`` are set: ``rule`` for diagonal
    and weighted-shift families (for the shift, ``S e_k = s_k e_{k+1}``),
    ``blocks`` for periodic direct sums, and ``finite`` plus ``rule`` for a
    finite matrix followed by a diagonal tail (the rule is evaluated at the
    global index).
    """

    kind: str
    rule: ScalarRule | None = None
    blocks: tuple[np.ndarray, ...] = ()
    finite: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown family kind {self.kind!r}")
        if self.kind in ("diagonal", "weighted-shift", "finite-plus-diagonal") and self.rule is None:
            raise PreconditionError(f"{self.kind} family needs a rule")
        if self.kind == "direct-sum-blocks":
            if not self.blocks:
                raise PreconditionError("direct-sum-blocks family needs at least one block")
            for B in self.blocks:
                if B.ndim != 2 or B.shape[0] != B.shape[1] or not np.all(np.isfinite(B)):
                    raise PreconditionError("blocks must be finite square matrices")
        if self.kind == "finite-plus-diagonal":
            F = self.finite
            if F is None or F.ndim != 2 or F.shape[0] != F.shape[1] or not np.all(np.isfinite(F)):
                raise PreconditionError("finite-plus-diagonal family needs a finite square matrix")

    @property
    def bound(self) -> float:
        """An upper bound for the operator norm."""
        if self.kind == "direct-sum-blocks":
            return max(float(np.linalg.norm(B, 2)) for B in self.blocks)
        if self.kind == "finite-plus-diagonal":
            return max(float(np.linalg.norm(self.finite, 2)), self.rule.bound)
        return self.rule.bound

    def describe(self) -> str:
        return self.label or self.kind


def diagonal(rule: str) -> OperatorFamily:
    if rule not in DIAGONAL_RULES:
        raise PreconditionError(f"unknown diagonal rule {rule!r}; known: {sorted(DIAGONAL_RULES)}")
    return OperatorFamily("diagonal", rule=DIAGONAL_RULES[rule], label=f"diagonal:{rule}")


def unit_shift() -> OperatorFamily:
    return OperatorFamily("weighted-shift", rule=SHIFT_RULES["unit"], label="shift:unit")


def block_family(blocks, label: str = "blocks") -> OperatorFamily:
    return OperatorFamily("direct-sum-blocks",
                          blocks=tuple(np.array(B, dtype=complex) for B in blocks), label=label)


def finite_plus_diagonal(F, rule: str, label: str | None = None) -> OperatorFamily:
    if rule not in DIAGONAL_RULES:
        raise PreconditionError(f"unknown diagonal rule {rule!r}")
    return OperatorFamily("finite-plus-diagonal", rule=DIAGONAL_RULES[rule],
                          finite=np.array(F, dtype=complex),
                          label=label or f"finite-plus-diagonal:<matrix>:{rule}")


def parse_family(descriptor: str) -> OperatorFamily:
    """Parse a family descriptor string.

    Grammar::

        diagonal:<rule>                      rule in DIAGONAL_RULES
        shift:unit
        blocks:<file>                        JSON {"blocks": [matrix document, ...]}
        finite-plus-diagonal:<file>:<rule>   file is a matrix document
    """
    head, _, rest = descriptor.partition(":")
    if head == "diagonal" and rest:
        return diagonal(rest)
    if head == "shift":
        if rest not in SHIFT_RULES:
            raise PreconditionError(f"unknown shift weights {rest!r}; known: {sorted(SHIFT_RULES)}")
        return unit_shift()
    if head == "blocks" and rest:
        doc = _load_json(rest)
        items = doc.get("blocks") if isinstance(doc, dict) else None
        if not isinstance(items, list) or not items:
            raise PreconditionError('blocks file needs a non-empty "blocks" list')
        return block_family([matrix_from_obj(b) for b in items], label=descriptor)
    if head == "finite-plus-diagonal":
        path, sep, rule = rest.rpartition(":")
        if not sep or not path:
            raise PreconditionError("expected finite-plus-diagonal:<file>:<rule>")
        return finite_plus_diagonal(matrix_from_obj(_load_json(path)), rule, label=descriptor)
    raise PreconditionError(f"cannot parse family descriptor {descriptor!r}")


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise PreconditionError(f"cannot read {path}: {exc}") from exc


def _block_layout(family: OperatorFamily, N: int) -> list[tuple[int, np.ndarray]]:
    """Start offsets (0-based) of the blocks that meet the first ``N`` indices."""
    out = []
    pos = 0
    j = 0
    while pos < N:
        B = family.blocks[j % len(family.blocks)]
        out.append((pos, B))
        pos += B.shape[0]
        j += 1
    return out


def compression(family: OperatorFamily, n: int, N: int) -> np.ndarray:
    """Compression to ``span{e_n, ..., e_N}`` (1-based, inclusive)."""
    if not (1 <= n <= N):
        raise PreconditionError(f"need 1 <= n <= N, got n={n}, N={N}")
    m = N - n + 1
    idx = np.arange(n, N + 1)
    kind = family.kind
    if kind == "diagonal":
        return np.diag(np.array([family.rule(int(k)) for k in idx], dtype=complex))
    if kind == "weighted-shift":
        A = np.zeros((m, m), dtype=complex)
        for r in range(m - 1):
            A[r + 1, r] = family.rule(int(idx[r]))
        return A
    if kind == "direct-sum-blocks":
        full = np.zeros((N, N), dtype=complex)
        for pos, B in _block_layout(family, N):
            s = min(B.shape[0], N - pos)
            full[pos:pos + s, pos:pos + s] = B[:s, :s]
        return full[n - 1:, n - 1:].copy()
    F = family.finite
    f = F.shape[0]
    A = np.zeros((m, m), dtype=complex)
    for r, k in enumerate(idx):
        if k > f:
            A[r, r] = family.rule(int(k))
    lo, hi = n - 1, min(N, f)
    if lo < hi:
        A[: hi - lo, : hi - lo] = F[lo:hi, lo:hi]
    return A


def truncate(family: OperatorFamily, N: int) -> np.ndarray:
    """Leading ``N x N`` section in the elementary basis."""
    if N < 1:
        raise PreconditionError("N must be at least 1")
    return compression(family, 1, N)


def tail_compression(family: OperatorFamily, n: int, N: int) -> np.ndarray:
    """``(N - n + 1)``-square compression to ``span{e_n, ..., e_N}``."""
    return compression(family, n, N)


@dataclass
class EssRangeEstimate:
    """Tail-window estimate of the essential numerical range.

    ``windows`` holds cl W of each tail compression.  ``polygons`` holds the
    nested tail estimates: polygon ``j`` is the convex hull of every window
    whose start index is at least ``n_j``.  ``intersection`` is their common
    part, ``resolution`` the Hausdorff distance between the last two windows
    (how far the estimate still moves per schedule step).
    """

    sections: list[tuple[int, int]]
    windows: list[geometry.Polygon]
    polygons: list[geometry.Polygon]
    intersection: geometry.Polygon | None
    oracle: object | None = None
    resolution: float = 0.0

    @property
    def empty(self) -> bool:
        return self.intersection is None


def _check_schedule(schedule) -> list[tuple[int, int]]:
    sched = [(int(n), int(N)) for n, N in schedule]
    if not sched:
        raise PreconditionError("schedule must be non-empty")
    for n, N in sched:
        if not (1 <= n <= N):
            raise PreconditionError(f"bad window ({n}, {N})")
    starts = [n for n, _ in sched]
    if any(b <= a for a, b in zip(starts, starts[1:])):
        raise PreconditionError("windows must be increasing in n")
    return sched


def ess_range_estimate(family: OperatorFamily, schedule=DEFAULT_SCHEDULE, grid: int = 256,
                       tol: float = 1e-9) -> EssRangeEstimate:
    """Estimate W_ess from the tail windows in ``schedule``.

    Raises nothing on an empty intersection; check ``estimate.empty``, which
    signals a schedule too aggressive for the tolerance.
    """
    sched = _check_schedule(schedule)
    windows = []
    for n, N in sched:
        B = boundary_sweep(tail_compression(family, n, N), grid=grid)
        windows.append(geometry.Polygon(B.polyline))
    polygons = []
    for j in range(len(windows)):
        pts = np.concatenate([w.vertices for w in windows[j:]])
        polygons.append(geometry.Polygon(pts))
    inter: geometry.Polygon | None = polygons[0]
    for P in polygons[1:]:
        inter = geometry.intersect(inter, P, tol)
        if inter is None:
            break
    resolution = geometry.hausdorff(windows[-2], windows[-1]) if len(windows) > 1 else 0.0
    try:
        oracle = ess_oracle(family)
    except UnsupportedError:
        oracle = None
    return EssRangeEstimate(sched, windows, polygons, inter, oracle, resolution)


def ess_oracle(family: OperatorFamily):
    """Exact W_ess where it is known in closed form.

    Diagonal families give the convex hull of the declared limit points (a
    compact diagonal gives ``{0}``), finite-plus-diagonal families inherit
    that of their tail, and the unit shift gives the closed unit disk.
    """
    if family.kind in ("diagonal", "finite-plus-diagonal"):
        return geometry.Polygon(np.array(family.rule.limits, dtype=complex))
    if family.kind == "weighted-shift" and family.rule.name == "unit":
        return geometry.Disk(0.0, 1.0)
    raise UnsupportedError(f"no closed-form essential range for {family.describe()}")


@dataclass
class SupportCheck:
    """Outcome of the essential support-line test in one direction."""

    theta: float
    verdict: str
    windows: list[tuple[int, int]]
    mu_full: np.ndarray
    mu_tail: np.ndarray
    gaps: np.ndarray
    intercept: float
    floor: float


def essential_support_check(family: OperatorFamily, theta: float,
                            schedule=DEFAULT_SCHEDULE) -> SupportCheck:
    """Decide whether ``mu(theta)`` looks essential for the infinite operator.

    For each window ``(n, N)`` the differences ``d = mu_full(N) - mu_tail(n, N)``
    are fitted by ``a + b / n`` over the last three windows.  The verdict is
    ``essential`` when the extrapolated ``a`` (or the last difference) is
    within the floor ``1e-3 * (1 + bound)``; ``discrete`` when ``a`` exceeds
    the floor while every difference and every isolation gap stay above it;
    ``inconclusive`` otherwise.
    """
    sched = _check_schedule(schedule)
    if len(sched) < 3:
        raise PreconditionError("the support check needs at least three windows")
    floor = 1e-3 * (1.0 + family.bound)
    mu_full, mu_tail, gaps = [], [], []
    for n, N in sched:
        s = support_value(truncate(family, N), theta)
        mu_full.append(s.mu)
        gaps.append(s.gap)
        mu_tail.append(support_value(tail_compression(family, n, N), theta).mu)
    mu_full, mu_tail, gaps = np.array(mu_full), np.array(mu_tail), np.array(gaps)
    d = mu_full - mu_tail
    x = 1.0 / np.array([n for n, _ in sched[-3:]], dtype=float)
    M = np.column_stack([np.ones(3), x])
    (a, _), *_ = np.linalg.lstsq(M, d[-3:], rcond=None)
    a = float(a)
    if abs(a) <= floor or d[-1] <= floor:
        verdict = "essential"
    elif a > floor and np.all(gaps[-3:] > floor) and np.all(d[-3:] > floor):
        verdict = "discrete"
    else:
        verdict = "inconclusive"
    return SupportCheck(float(theta), verdict, sched, mu_full, mu_tail, gaps, a, floor)


def parse_schedule(text: str) -> list[tuple[int, int]]:
    """``"n1:N1,n2:N2,..."`` to a list of windows."""
    out = []
    for part in text.split(","):
        a, sep, b = part.strip().partition(":")
        if not sep:
            raise PreconditionError(f"bad window {part!r}; expected n:N")
        try:
            out.append((int(a), int(b)))
        except ValueError as exc:
            raise PreconditionError(f"bad window {part!r}") from exc
    return _check_schedule(out)


def tail_distance_bound(family: OperatorFamily, n: int) -> float:
    """``sup_{k >= n} dist(d_k, limits)`` for diagonal families (sampled to 64 n)."""
    if family.kind != "diagonal":
        raise UnsupportedError("tail bound is only available for diagonal families")
    lim = np.array(family.rule.limits)
    ks = np.arange(n, 64 * n + 1)
    vals = np.array([family.rule(int(k)) for k in ks])
    return float(np.max(np.min(np.abs(vals[:, None] - lim[None, :]), axis=1)))


__all__ = [
    "DEFAULT_SCHEDULE", "DIAGONAL_RULES", "SHIFT_RULES", "EssRangeEstimate", "OperatorFamily",
    "ScalarRule", "SupportCheck", "block_family", "compression", "diagonal", "ess_oracle",
    "ess_range_estimate", "essential_support_check", "finite_plus_diagonal", "parse_family",
    "parse_schedule", "tail_compression", "truncate", "unit_shift",
]
