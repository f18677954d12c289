"""Dense complex matrix helpers and a self-contained Hermitian eigensolver.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The eigensolver
splits the matrix into decoupled pieces (graph components, then unreduced
tridiagonal segments), reduces dense pieces with Householder reflections,
and runs implicit QL on the resulting real tridiagonals.  Eigenvectors of
large segments are obtained by inverse iteration only when a subset is
requested (:func:`top_eigenspace`).

Inner products are linear in the first argument: ``<x, y> = y^H x``, so the
Rayleigh quotient ``<Ax, x>`` is ``x^H A x``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import ConvergenceError, DimensionError, PreconditionError

HERMITIAN_RTOL = 1e-12
UNIT_TOL = 1e-10

_FULL_QL_LIMIT = 48
_EPS = np.finfo(float).eps


def as_matrix(A) -> np.ndarray:
    """Validate ``A`` as a finite square matrix and return a complex copy."""
    M = np.array(A, dtype=complex, copy=True)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise PreconditionError("matrix has non-finite entries")
    return M


def _square(A) -> np.ndarray:
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return M


def maxnorm(A) -> float:
    return float(np.max(np.abs(A))) if np.size(A) else 0.0


def norm2(A) -> float:
    """Spectral norm."""
    return float(np.linalg.norm(np.asarray(A), 2))


def is_hermitian(H, rtol: float = HERMITIAN_RTOL) -> bool:
    H = _square(H)
    return float(np.max(np.abs(H - H.conj().T))) <= rtol * (1.0 + maxnorm(H))


def real_part(A) -> np.ndarray:
    """Return ``(A + A^H) / 2``."""
    A = _square(A)
    return 0.5 * (A + A.conj().T)


def imag_part(A) -> np.ndarray:
    """Return ``(A - A^H) / (2i)``, so that ``A = real_part(A) + 1j * imag_part(A)``."""
    A = _square(A)
    return (A - A.conj().T) / 2j


def rotate(A, theta: float) -> np.ndarray:
    """Entrywise product ``exp(-i theta) * A``."""
    return np.exp(-1j * theta) * np.asarray(A, dtype=complex)


def rayleigh(A, x) -> complex:
    """``<Ax, x>`` for a unit vector ``x``."""
    x = np.asarray(x, dtype=complex)
    nx = np.linalg.norm(x)
    if abs(nx - 1.0) > UNIT_TOL:
        raise PreconditionError(f"rayleigh needs a unit vector, got norm {nx:.3g}")
    return complex(np.vdot(x, np.asarray(A) @ x))


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues with orthonormal eigenvectors stored as columns."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def top(self) -> float:
        return float(self.values[-1])

    def __iter__(self):
        return iter((self.values, self.vectors))


# ---------------------------------------------------------------------------
# solver internals

@dataclass
class _Segment:
    """An unreduced real tridiagonal piece of ``H`` and how to lift its vectors."""

    rows: np.ndarray        # global indices of the owning component
    start: int              # segment slice inside the component
    stop: int
    d: np.ndarray
    r: np.ndarray
    phases: np.ndarray      # diagonal unitary of the component
    refl: np.ndarray | None  # Householder reflectors of the component

    @property
    def size(self) -> int:
        return self.stop - self.start


def _is_tridiagonal(H: np.ndarray) -> bool:
    n = H.shape[0]
    if n <= 2:
        return True
    return not np.any(np.triu(H, 2))


def _components(H: np.ndarray) -> list[np.ndarray]:
    n = H.shape[0]
    adj = H != 0
    np.fill_diagonal(adj, False)
    if adj[0, 1:].all():
        return [np.arange(n)]
    # breadth-first search over whole frontiers
    labels = np.full(n, -1)
    count = 0
    for start in range(n):
        if labels[start] >= 0:
            continue
        labels[start] = count
        frontier = np.zeros(n, dtype=bool)
        frontier[start] = True
        while frontier.any():
            reach = adj[frontier].any(axis=0) & (labels < 0)
            labels[reach] = count
            frontier = reach
        count += 1
    if count == 1:
        return [np.arange(n)]
    return [np.flatnonzero(labels == c) for c in range(count)]


def _segments(H: np.ndarray) -> list[_Segment]:
    pieces = []
    if _is_tridiagonal(H):
        comps = [np.arange(H.shape[0])]
    else:
        comps = _components(H)
    for rows in comps:
        B = H[np.ix_(rows, rows)] if len(comps) > 1 else H
        m = B.shape[0]
        refl = None
        if m == 1:
            d = np.array([B[0, 0].real])
            e = np.zeros(0, dtype=complex)
        elif _is_tridiagonal(B):
            d = B.diagonal().real.copy()
            e = np.diagonal(B, -1).copy()
        else:
            d, e, refl = kernels.tridiagonalize(np.array(B, dtype=complex, order="C"))
        phases = np.ones(m, dtype=complex)
        r = np.abs(e)
        for k in range(m - 1):
            phases[k + 1] = phases[k] * (e[k] / r[k] if r[k] != 0.0 else 1.0)
        # split at negligible couplings
        cut = np.flatnonzero(r <= _EPS * (np.abs(d[:-1]) + np.abs(d[1:])))
        bounds = [0, *(cut + 1).tolist(), m]
        for a, b in zip(bounds[:-1], bounds[1:]):
            pieces.append(_Segment(rows, a, b, d[a:b].copy(), r[a:b - 1].copy(), phases, refl))
    return pieces


def _segment_values(seg: _Segment) -> np.ndarray:
    if seg.size == 1:
        return seg.d.copy()
    d = seg.d.copy()
    failed = kernels.tql(d, seg.r.copy())
    if failed >= 0:
        raise ConvergenceError(f"QL iteration did not converge (eigenvalue {failed})")
    return np.sort(d)


def _segment_vectors_full(seg: _Segment) -> tuple[np.ndarray, np.ndarray]:
    """All eigenpairs of a segment; vectors as columns, values ascending."""
    m = seg.size
    if m == 1:
        return seg.d.copy(), np.ones((1, 1))
    d = seg.d.copy()
    zt = np.eye(m)
    failed = kernels.tql(d, seg.r.copy(), zt)
    if failed >= 0:
        raise ConvergenceError(f"QL iteration did not converge (eigenvalue {failed})")
    order = np.argsort(d, kind="stable")
    return d[order], zt[order].T.copy()


def _inverse_iteration(seg: _Segment, lams: np.ndarray) -> np.ndarray:
    """Eigenvectors of a segment for the given (ascending) eigenvalues."""
    m = seg.size
    scale = float(np.max(np.abs(seg.d))) + 2.0 * float(np.max(seg.r, initial=0.0))
    rng = np.random.default_rng(0x5EED)
    out = np.empty((m, len(lams)))
    for j, lam in enumerate(lams):
        x = 1.0 + 0.5 * rng.random(m)
        close = [k for k in range(j) if abs(lams[k] - lam) <= 1e-3 * max(scale, 1.0)]
        for _ in range(4):
            x = kernels.shifted_solve(seg.d, seg.r, float(lam), x)
            for k in close:
                x -= (out[:, k] @ x) * out[:, k]
            x /= np.linalg.norm(x)
        out[:, j] = x
    return out


def _lift(seg: _Segment, y: np.ndarray, n: int) -> np.ndarray:
    m = len(seg.rows)
    z = np.zeros((m, y.shape[1]), dtype=complex)
    z[seg.start:seg.stop] = y
    z *= seg.phases[:, None]
    if seg.refl is not None:
        z = kernels.apply_reflectors(seg.refl, np.ascontiguousarray(z))
    out = np.zeros((n, y.shape[1]), dtype=complex)
    out[seg.rows] = z
    return out


def _prepare(H, check: bool) -> np.ndarray:
    H = _square(H)
    if H.shape[0] == 0:
        raise DimensionError("empty matrix")
    if check and not is_hermitian(H):
        raise PreconditionError("matrix is not Hermitian within tolerance")
    return 0.5 * (H + H.conj().T)


def _check_residual(H, values, vectors):
    if vectors.shape[1] == 0:
        return
    res = np.linalg.norm(H @ vectors - vectors * values, axis=0)
    bound = 1e-10 * (1.0 + np.max(np.abs(values)))
    worst = float(res.max())
    if worst > bound:
        raise ConvergenceError(f"eigenvector residual {worst:.3g} exceeds {bound:.3g}", worst)


def hermitian_eigvals(H, *, check: bool = True) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    H = _prepare(H, check)
    vals = [_segment_values(seg) for seg in _segments(H)]
    return np.sort(np.concatenate(vals))


def hermitian_eig(H, *, check: bool = True) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Raises
    ------
    PreconditionError
        If ``H`` is not Hermitian within ``1e-12 * (1 + max|H_jk|)``.
    ConvergenceError
        If QL fails or the computed residual exceeds ``1e-10 * (1 + ||H||)``.
    """
    H = _prepare(H, check)
    n = H.shape[0]
    values, vectors = [], []
    for seg in _segments(H):
        w, y = _segment_vectors_full(seg)
        values.append(w)
        vectors.append(_lift(seg, y, n))
    values = np.concatenate(values)
    vectors = np.concatenate(vectors, axis=1)
    order = np.argsort(values, kind="stable")
    values, vectors = values[order], vectors[:, order]
    _check_residual(H, values, vectors)
    return EigenDecomposition(values, vectors)


def top_eigenspace(H, tol: float, *, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """All eigenvalues plus an orthonormal basis of the top cluster.

    The cluster is every eigenvalue within ``tol`` of the largest one.  Returns
    ``(values, V)`` with ``values`` ascending and ``V`` of shape ``(n, m)``;
    the columns of ``V`` pair with ``values[n - m:]``.
    """
    H = _prepare(H, check)
    n = H.shape[0]
    segs = _segments(H)
    seg_vals = [_segment_values(seg) for seg in segs]
    allv = np.concatenate(seg_vals)
    mu = float(allv.max())
    picked_vals, picked_vecs = [], []
    for seg, w in zip(segs, seg_vals):
        sel = np.flatnonzero(w >= mu - tol)
        if sel.size == 0:
            continue
        if seg.size <= _FULL_QL_LIMIT:
            w_full, y_full = _segment_vectors_full(seg)
            y = y_full[:, sel]
            lam = w_full[sel]
        else:
            lam = w[sel]
            y = _inverse_iteration(seg, lam)
        picked_vals.append(lam)
        picked_vecs.append(_lift(seg, y, n))
    lam = np.concatenate(picked_vals)
    V = np.concatenate(picked_vecs, axis=1)
    order = np.argsort(lam, kind="stable")
    lam, V = lam[order], V[:, order]
    _check_residual(H, lam, V)
    values = np.sort(allv)
    return values, V
