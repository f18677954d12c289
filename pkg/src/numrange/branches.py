"""Continuation of eigenvalue branches of ``H(theta) = Re(exp(-i theta) A)``.

Branch identity is carried by eigenvectors, not by sort order: at each step
the previous vectors are matched to the new eigenspaces by overlap, so
branches may cross in value.  Each branch ``(lambda_j, phi_j)`` induces the
curve ``zeta_j(theta) = <A phi_j, phi_j>``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchBreakError
from .linalg import as_matrix, hermitian_eig, imag_part, norm2, real_part, rotate
from .support import NumericalRangeBoundary, support_value

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass
class Branch:
    """Samples of one analytic branch; ``phis`` holds one vector per row."""

    thetas: np.ndarray
    lambdas: np.ndarray
    phis: np.ndarray
    zetas: np.ndarray
    is_top: np.ndarray
    gaps: np.ndarray
    overlaps: np.ndarray
    crossings: list[tuple[float, int]] = field(default_factory=list)

    def __len__(self):
        return self.thetas.size

    @property
    def min_overlap(self) -> float:
        return float(self.overlaps.min()) if self.overlaps.size else 1.0


def _clusters(values: np.ndarray, tol: float) -> list[np.ndarray]:
    groups = [[0]]
    for i in range(1, values.size):
        if values[i] - values[i - 1] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [np.array(g) for g in groups]


def _match(phis: np.ndarray, lambdas: np.ndarray, values: np.ndarray, vectors: np.ndarray,
           cluster_tol: float):
    """Continue each row of ``phis`` into the new eigenbasis.

    Returns ``(new_phis, overlaps, cluster_sizes)``.  Each branch is assigned
    greedily to the eigenspace cluster with the largest projection (ties by
    eigenvalue proximity); within a cluster the closest orthonormal set (polar
    factor) is taken, which also fixes the phase gauge.
    """
    groups = _clusters(values, cluster_tol)
    k = phis.shape[0]
    proj = np.array([[np.linalg.norm(vectors[:, g].conj().T @ phis[b]) for g in groups]
                     for b in range(k)])
    centers = np.array([values[g].mean() for g in groups])
    pairs = sorted(((proj[b, c], -abs(lambdas[b] - centers[c]), b, c)
                    for b in range(k) for c in range(len(groups))), reverse=True)
    owner = -np.ones(k, dtype=int)
    room = np.array([g.size for g in groups])
    for _, _, b, c in pairs:
        if owner[b] < 0 and room[c] > 0:
            owner[b] = c
            room[c] -= 1
    new = np.empty_like(phis)
    sizes = np.empty(k, dtype=int)
    for c in set(owner.tolist()):
        members = np.flatnonzero(owner == c)
        V = vectors[:, groups[c]]
        C = V.conj().T @ phis[members].T
        W, _, Zh = np.linalg.svd(C, full_matrices=False)
        block = V @ (W @ Zh)
        for col, b in enumerate(members):
            v = block[:, col]
            ov = np.vdot(v, phis[b])
            if ov != 0:
                v = v * (ov / abs(ov))
            new[b] = v / np.linalg.norm(v)
            sizes[b] = groups[c].size
    overlaps = np.abs(np.einsum("ij,ij->i", new.conj(), phis))
    return new, overlaps, sizes


def trace_branches(A, theta_center: float, halfwidth: float, step: float, k_top: int = 1, *,
                   overlap_min: float = INV_SQRT2, floor_ratio: float = 1.0 / 64,
                   reverse: bool = False, degeneracy_tol: float | None = None) -> list[Branch]:
    """Follow the ``k_top`` leading eigenvalue branches across a theta window.

    The step is halved whenever the worst overlap between consecutive
    eigenvectors drops below ``overlap_min`` and is allowed to grow back
    afterwards; at the floor ``step * floor_ratio`` a :class:`BranchBreakError`
    is raised.  With ``reverse`` the window is traversed from its right end,
    but samples are still returned in increasing theta.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if k_top < 1:
        raise ValueError("k_top must be at least 1")
    A = as_matrix(A)
    n = A.shape[0]
    k_top = min(k_top, n)
    scale = 1.0 + norm2(A)
    cluster_tol = 1e-10 * scale
    top_tol = 1e-8 * scale if degeneracy_tol is None else degeneracy_tol
    min_step = step * floor_ratio
    lo, hi = theta_center - halfwidth, theta_center + halfwidth
    start, stop, sign = (hi, lo, -1.0) if reverse else (lo, hi, 1.0)

    def eig(theta):
        return hermitian_eig(real_part(rotate(A, theta)), check=False)

    E = eig(start)
    idx = np.arange(n - 1, n - 1 - k_top, -1)
    phis = E.vectors[:, idx].T.copy()
    lambdas = E.values[idx].copy()
    records = [(start, E, phis, np.ones(k_top), np.ones(k_top, dtype=int))]

    theta, h = start, step
    span = abs(stop - start)
    while abs(theta - start) < span - 1e-15 * max(1.0, span):
        h_try = min(h, span - abs(theta - start))
        while True:
            t_new = theta + sign * h_try
            if abs(t_new - start) > span - 1e-13 * max(1.0, span):
                t_new = stop
            E = eig(t_new)
            new, overlaps, sizes = _match(phis, lambdas, E.values, E.vectors, cluster_tol)
            if overlaps.min() >= overlap_min:
                break
            if h_try <= min_step * (1 + 1e-12):
                raise BranchBreakError(
                    f"branch lost at theta={t_new:.6g} (overlap {overlaps.min():.3g})",
                    t_new, float(overlaps.min()))
            h_try = max(0.5 * h_try, min_step)
        phis = new
        lambdas = np.einsum("ij,jk,ik->i", phis.conj(), real_part(rotate(A, t_new)), phis).real
        records.append((t_new, E, phis, overlaps, sizes))
        theta = t_new
        h = min(2.0 * h_try, step)

    if reverse:
        records = records[::-1]
    return _build(A, records, k_top, top_tol)


def _build(A, records, k_top, top_tol) -> list[Branch]:
    thetas = np.array([r[0] for r in records])
    out = []
    for b in range(k_top):
        phis = np.array([r[2][b] for r in records])
        lams, zetas, tops, gaps = [], [], [], []
        for (t, E, ph, _, sizes) in records:
            v = ph[b]
            H = real_part(rotate(A, t))
            lam = float(np.vdot(v, H @ v).real)
            lams.append(lam)
            zetas.append(complex(np.vdot(v, A @ v)))
            tops.append(lam >= E.values[-1] - top_tol)
            others = np.abs(E.values - lam)
            others = np.sort(others)
            gaps.append(0.0 if sizes[b] > 1 else float(others[1]) if others.size > 1 else math.inf)
        overlaps = np.array([r[3][b] for r in records[1:]]) if len(records) > 1 else np.ones(0)
        out.append(Branch(thetas.copy(), np.array(lams), phis, np.array(zetas), np.array(tops),
                          np.array(gaps), overlaps))
    cross_tol = 1e-10
    for i in range(k_top):
        for j in range(i + 1, k_top):
            diff = out[i].lambdas - out[j].lambdas
            for s in range(thetas.size):
                hit = abs(diff[s]) <= cross_tol
                if not hit and s + 1 < thetas.size and diff[s] * diff[s + 1] < 0:
                    w = diff[s] / (diff[s] - diff[s + 1])
                    t = float(thetas[s] + w * (thetas[s + 1] - thetas[s]))
                    out[i].crossings.append((t, j))
                    out[j].crossings.append((t, i))
                elif hit:
                    out[i].crossings.append((float(thetas[s]), j))
                    out[j].crossings.append((float(thetas[s]), i))
    return out


def _derivative(x: np.ndarray, y: np.ndarray, k: int) -> float:
    """Second-order three-point derivative on a non-uniform grid."""
    hm = x[k] - x[k - 1]
    hp = x[k + 1] - x[k]
    return (hm * hm * y[k + 1] - hp * hp * y[k - 1] + (hp * hp - hm * hm) * y[k]) / (hm * hp * (hm + hp))


def hellmann_feynman_check(A, branch: Branch, degeneracy_tol: float | None = None) -> float:
    """Max deviation between finite-difference and Hellmann-Feynman slopes.

    The exact slope of a simple branch is ``<Im(exp(-i theta) A) phi, phi>``.
    Samples whose eigenvalue is not isolated by more than ``degeneracy_tol``
    are skipped with a warning.
    """
    A = as_matrix(A)
    tol = 1e-8 * (1.0 + norm2(A)) if degeneracy_tol is None else degeneracy_tol
    worst = 0.0
    skipped = []
    for k in range(1, len(branch) - 1):
        if min(branch.gaps[k - 1:k + 2]) <= tol:
            skipped.append(float(branch.thetas[k]))
            continue
        fd = _derivative(branch.thetas, branch.lambdas, k)
        v = branch.phis[k]
        exact = float(np.vdot(v, imag_part(rotate(A, branch.thetas[k])) @ v).real)
        worst = max(worst, abs(fd - exact))
    if skipped:
        warnings.warn(f"skipped {len(skipped)} degenerate samples, first at theta={skipped[0]:.6g}",
                      RuntimeWarning, stacklevel=2)
    return worst


def boundary_curve_from_support(boundary: NumericalRangeBoundary) -> tuple[np.ndarray, np.ndarray]:
    """``z(theta) = exp(i theta) (mu + i mu')`` at samples with simple top eigenvalue.

    ``mu'`` comes from three-point differences over the cyclic sample list;
    samples touching a degenerate neighbour are dropped with a warning.
    """
    s = boundary.samples
    m = len(s)
    th = np.array([x.theta for x in s])
    mu = np.array([x.mu for x in s])
    flat = np.array([x.multiplicity > 1 for x in s])
    # pad cyclically so every sample has two neighbours
    th_p = np.concatenate([[th[-1] - 2 * math.pi], th, [th[0] + 2 * math.pi]])
    mu_p = np.concatenate([[mu[-1]], mu, [mu[0]]])
    fl_p = np.concatenate([[flat[-1]], flat, [flat[0]]])
    keep_t, keep_z = [], []
    dropped = 0
    for k in range(1, m + 1):
        if fl_p[k - 1:k + 2].any():
            dropped += 1
            continue
        d = _derivative(th_p, mu_p, k)
        keep_t.append(th_p[k])
        keep_z.append(np.exp(1j * th_p[k]) * (mu_p[k] + 1j * d))
    if dropped:
        warnings.warn(f"excluded {dropped} samples next to flat portions", RuntimeWarning, stacklevel=2)
    return np.array(keep_t), np.array(keep_z, dtype=complex)


def regularity_check(branch: Branch, tol: float = 1e-9) -> str:
    """Classify the zeta-curve as ``point``, ``regular`` or ``irregular-numerical``."""
    if len(branch) < 3:
        raise ValueError("need at least three samples")
    z = branch.zetas
    diam = float(np.max(np.abs(z[:, None] - z[None, :])))
    if diam <= tol:
        return "point"
    speed = np.abs(np.diff(z)) / np.diff(branch.thetas)
    if float(speed.min()) > tol:
        return "regular"
    return "irregular-numerical"


def isolation_gap(A, theta: float, degeneracy_tol: float | None = None) -> tuple[float, int]:
    """Spectral gap below the top cluster of ``H(theta)`` and the cluster size."""
    s = support_value(A, theta, degeneracy_tol)
    return s.gap, s.multiplicity
