# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled eigen kernels.

Same contracts as :mod:`numrange._purepy`; see that module for conventions.
"""

import numpy as np

from libc.math cimport fabs, hypot, sqrt, copysign
from scipy.linalg.cython_blas cimport zgemv, zgeru

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)
    double creal(double complex)
    double cimag(double complex)


def tridiagonalize(double complex[:, ::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t k, i, j, m
    cdef double tail, xnorm, vnorm, kk
    cdef double complex x0, phase, alpha, s, vi, qi
    refl_arr = np.zeros((n, n), dtype=complex)
    cdef double complex[:, ::1] refl = refl_arr
    v_arr = np.empty(n, dtype=complex)
    w_arr = np.empty(n, dtype=complex)
    cdef double complex[::1] v = v_arr
    cdef double complex[::1] w = w_arr
    with nogil:
        for k in range(n - 2):
            m = n - k - 1
            tail = 0.0
            for i in range(k + 2, n):
                tail += creal(a[i, k]) * creal(a[i, k]) + cimag(a[i, k]) * cimag(a[i, k])
            if tail == 0.0:
                continue
            tail = sqrt(tail)
            x0 = a[k + 1, k]
            xnorm = hypot(cabs(x0), tail)
            if x0 != 0:
                phase = x0 / cabs(x0)
            else:
                phase = 1.0
            alpha = -phase * xnorm
            for i in range(m):
                v[i] = a[k + 1 + i, k]
            v[0] = v[0] - alpha
            vnorm = 0.0
            for i in range(m):
                vnorm += creal(v[i]) * creal(v[i]) + cimag(v[i]) * cimag(v[i])
            vnorm = sqrt(vnorm)
            for i in range(m):
                v[i] = v[i] / vnorm
            # w = B v on the trailing block, using the lower triangle only
            for i in range(m):
                w[i] = 0.0
            for i in range(m):
                s = a[k + 1 + i, k + 1 + i] * v[i]
                vi = v[i]
                for j in range(i):
                    s = s + a[k + 1 + i, k + 1 + j] * v[j]
                    w[j] = w[j] + conj(a[k + 1 + i, k + 1 + j]) * vi
                w[i] = w[i] + s
            kk = 0.0
            for i in range(m):
                kk += creal(conj(v[i]) * w[i])
            for i in range(m):
                w[i] = 2.0 * w[i] - 2.0 * kk * v[i]
            # B -= v q^H + q v^H, lower triangle then mirrored
            for i in range(m):
                vi = v[i]
                qi = w[i]
                for j in range(i + 1):
                    a[k + 1 + i, k + 1 + j] = (a[k + 1 + i, k + 1 + j]
                                               - vi * conj(w[j]) - qi * conj(v[j]))
                a[k + 1 + i, k + 1 + i] = creal(a[k + 1 + i, k + 1 + i])
                for j in range(i):
                    a[k + 1 + j, k + 1 + i] = conj(a[k + 1 + i, k + 1 + j])
            a[k + 1, k] = alpha
            a[k, k + 1] = conj(alpha)
            for i in range(k + 2, n):
                a[i, k] = 0.0
                a[k, i] = 0.0
            for i in range(m):
                refl[k + 1 + i, k] = v[i]
    d = np.empty(n)
    e = np.empty(max(n - 1, 0), dtype=complex)
    for k in range(n):
        d[k] = creal(a[k, k])
    for k in range(n - 1):
        e[k] = a[k + 1, k]
    return d, e, refl_arr


def tql(double[::1] d, double[::1] e, zt=None, int max_iter=60):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t l, m, i, k, ncol = 0
    cdef int it, underflow
    cdef Py_ssize_t failed = -1
    cdef double dd, g, r, s, c, p, f, b, zi
    cdef double[:, ::1] z
    cdef bint vectors = zt is not None
    ee_arr = np.zeros(n)
    cdef double[::1] ee = ee_arr
    for i in range(n - 1):
        ee[i] = e[i]
    if vectors:
        z = zt
        ncol = z.shape[1]
    with nogil:
        for l in range(n):
            it = 0
            while True:
                m = l
                while m < n - 1:
                    dd = fabs(d[m]) + fabs(d[m + 1])
                    if fabs(ee[m]) + dd == dd:
                        break
                    m += 1
                if m == l:
                    break
                it += 1
                if it > max_iter:
                    failed = l
                    break
                g = (d[l + 1] - d[l]) / (2.0 * ee[l])
                r = hypot(g, 1.0)
                g = d[m] - d[l] + ee[l] / (g + copysign(r, g))
                s = 1.0
                c = 1.0
                p = 0.0
                i = m - 1
                underflow = 0
                while i >= l:
                    f = s * ee[i]
                    b = c * ee[i]
                    r = hypot(f, g)
                    ee[i + 1] = r
                    if r == 0.0:
                        d[i + 1] -= p
                        ee[m] = 0.0
                        underflow = 1
                        break
                    s = f / r
                    c = g / r
                    g = d[i + 1] - p
                    r = (d[i] - g) * s + 2.0 * c * b
                    p = s * r
                    d[i + 1] = g + p
                    g = c * r - b
                    if vectors:
                        for k in range(ncol):
                            zi = z[i, k]
                            z[i, k] = c * zi - s * z[i + 1, k]
                            z[i + 1, k] = s * zi + c * z[i + 1, k]
                    i -= 1
                if underflow:
                    continue
                d[l] -= p
                ee[l] = g
                ee[m] = 0.0
            if failed >= 0:
                break
    return failed


def shifted_solve(double[::1] d, double[::1] e, double shift, b):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i
    cdef double norm = 0.0, emax = 0.0, tiny, sub, mult, diag_next, super_next, tmp
    for i in range(n):
        if fabs(d[i]) > norm:
            norm = fabs(d[i])
    for i in range(n - 1):
        if fabs(e[i]) > emax:
            emax = fabs(e[i])
    norm += 2.0 * emax
    tiny = 2.220446049250313e-16 * (norm if norm > 1.0 else 1.0)
    u0_arr = np.empty(n)
    u1_arr = np.zeros(n)
    u2_arr = np.zeros(n)
    x_arr = np.array(b, dtype=float)
    cdef double[::1] u0 = u0_arr
    cdef double[::1] u1 = u1_arr
    cdef double[::1] u2 = u2_arr
    cdef double[::1] x = x_arr
    with nogil:
        for i in range(n):
            u0[i] = d[i] - shift
        for i in range(n - 1):
            u1[i] = e[i]
        for i in range(n - 1):
            sub = e[i]
            if fabs(u0[i]) >= fabs(sub):
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
                tmp = x[i]
                x[i] = x[i + 1]
                x[i + 1] = tmp - mult * x[i + 1]
        if u0[n - 1] == 0.0:
            u0[n - 1] = tiny
        x[n - 1] /= u0[n - 1]
        if n > 1:
            x[n - 2] = (x[n - 2] - u1[n - 2] * x[n - 1]) / u0[n - 2]
        for i in range(n - 3, -1, -1):
            x[i] = (x[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / u0[i]
    return x_arr


def apply_reflectors(double complex[:, ::1] refl, double complex[:, ::1] y):
    cdef Py_ssize_t n = refl.shape[0]
    cdef int ncol = <int>y.shape[1]
    cdef int m, inc = 1
    cdef Py_ssize_t k, i
    cdef bint active
    cdef double complex one = 1.0, zero = 0.0, minus_two = -2.0
    cdef char trans = b"N"
    vc_arr = np.empty(n, dtype=complex)
    v_arr = np.empty(n, dtype=complex)
    s_arr = np.empty(max(ncol, 1), dtype=complex)
    cdef double complex[::1] vc = vc_arr
    cdef double complex[::1] v = v_arr
    cdef double complex[::1] s = s_arr
    if ncol == 0:
        return np.asarray(y)
    with nogil:
        for k in range(n - 3, -1, -1):
            active = False
            for i in range(k + 1, n):
                v[i] = refl[i, k]
                vc[i] = conj(v[i])
                if v[i] != 0:
                    active = True
            if not active:
                continue
            # the row-major block y[k+1:, :] is the column-major ncol x m
            # matrix Y^T: s = Y^T conj(v), then Y^T -= 2 s v^T
            m = <int>(n - k - 1)
            zgemv(&trans, &ncol, &m, &one, &y[k + 1, 0], &ncol, &vc[k + 1], &inc, &zero, &s[0], &inc)
            zgeru(&ncol, &m, &minus_two, &s[0], &inc, &v[k + 1], &inc, &y[k + 1, 0], &ncol)
    return np.asarray(y)
