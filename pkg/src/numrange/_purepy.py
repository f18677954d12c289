"""Pure-Python eigen kernels.

Reference implementation of the routines in ``_kernels.pyx``.  The two
modules expose the same four functions with the same argument conventions,
and :mod:`numrange._backend` picks one of them at import time.

Conventions
-----------
* A real symmetric tridiagonal matrix is given by its diagonal ``d`` (length
  n) and off-diagonal ``e`` (length n - 1), ``e[i]`` coupling rows i and i+1.
* Eigenvector blocks are stored *row-wise*: ``zt[j]`` is the j-th vector.
"""

from __future__ import annotations

import math

import numpy as np

_EPS = np.finfo(float).eps


def tridiagonalize(a):
    """Reduce a Hermitian matrix to tridiagonal form by Householder reflections.

    ``a`` is overwritten.  Returns ``(d, e, refl)`` where ``d`` is the real
    diagonal, ``e`` the complex subdiagonal, and column ``k`` of ``refl``
    holds the unit reflector ``v_k`` (zero when step k was skipped) such that
    ``H = Q T Q^H`` with ``Q = P_0 P_1 ... P_{n-3}`` and ``P_k = I - 2 v_k v_k^H``.
    """
    n = a.shape[0]
    refl = np.zeros((n, n), dtype=complex)
    for k in range(n - 2):
        x = a[k + 1:, k]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        xnorm = math.hypot(abs(x[0]), tail)
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        alpha = -phase * xnorm
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        b = a[k + 1:, k + 1:]
        w = b @ v
        kk = np.vdot(v, w).real
        q = 2.0 * w - 2.0 * kk * v
        b -= np.outer(v, q.conj()) + np.outer(q, v.conj())
        a[k + 1, k] = alpha
        a[k, k + 1] = np.conj(alpha)
        a[k + 2:, k] = 0.0
        a[k, k + 2:] = 0.0
        refl[k + 1:, k] = v
    d = a.diagonal().real.copy()
    e = np.array([a[k + 1, k] for k in range(n - 1)], dtype=complex)
    return d, e, refl


def tql(d, e, zt=None, max_iter=60):
    """Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal.

    ``d`` receives the (unsorted) eigenvalues in place; ``e`` is destroyed.
    When ``zt`` is given its rows are rotated along, so passing the identity
    yields the eigenvectors as rows.  Returns the number of the eigenvalue
    that failed to converge, or -1 on success.
    """
    n = d.shape[0]
    ee = np.zeros(n)
    ee[: n - 1] = e[: n - 1]
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                return l
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if zt is not None:
                    zi = zt[i].copy()
                    zt[i] = c * zi - s * zt[i + 1]
                    zt[i + 1] = s * zi + c * zt[i + 1]
                i -= 1
            if underflow:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0
    return -1


def shifted_solve(d, e, shift, b):
    """Solve ``(T - shift*I) x = b`` for symmetric tridiagonal T.

    Gaussian elimination with partial pivoting; exactly singular pivots are
    replaced by ``eps * ||T||`` so the routine doubles as the inverse
    iteration step.  ``b`` is not modified.
    """
    n = d.shape[0]
    norm = float(np.max(np.abs(d))) + (2.0 * float(np.max(np.abs(e))) if n > 1 else 0.0)
    tiny = _EPS * max(norm, 1.0)
    u0 = d - shift
    u1 = np.zeros(n)
    u1[: n - 1] = e
    u2 = np.zeros(n)
    x = np.array(b, dtype=float)
    for i in range(n - 1):
        sub = e[i]
        if abs(u0[i]) >= abs(sub):
            if u0[i] == 0.0:
                u0[i] = tiny
            mult = sub / u0[i]
            u0[i + 1] -= mult * u1[i]
            x[i + 1] -= mult * x[i]
        else:
            mult = u0[i] / sub
            diag_next = u0[i + 1]
            super_next = u1[i + 1] if i + 1 < n - 1 else 0.0
            u0[i] = sub
            u0[i + 1] = u1[i] - mult * diag_next
            if i + 1 < n - 1:
                u1[i + 1] = -mult * super_next
            u1[i] = diag_next
            u2[i] = super_next
            x[i], x[i + 1] = x[i + 1], x[i] - mult * x[i + 1]
    if u0[n - 1] == 0.0:
        u0[n - 1] = tiny
    x[n - 1] /= u0[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - u1[n - 2] * x[n - 1]) / u0[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / u0[i]
    return x


def apply_reflectors(refl, y):
    """Overwrite ``y`` (n x m, complex) with ``P_0 P_1 ... P_{n-3} y``."""
    n = refl.shape[0]
    for k in range(n - 3, -1, -1):
        v = refl[k + 1:, k]
        if not v.any():
            continue
        block = y[k + 1:]
        block -= 2.0 * np.outer(v, v.conj() @ block)
    return y
