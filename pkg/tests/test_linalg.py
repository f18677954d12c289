from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from numrange import linalg
from numrange.errors import DimensionError, PreconditionError
from numrange.linalg import (as_matrix, hermitian_eig, hermitian_eigvals, imag_part, rayleigh,
                             real_part, rotate, top_eigenspace)


def _hermitian(seed, n):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (X + X.conj().T)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 50))
def test_reconstruction_and_orthogonality(seed, n):
    H = _hermitian(seed, n)
    vals, V = hermitian_eig(H)
    scale = 1 + np.linalg.norm(H, 2)
    assert np.all(np.diff(vals) >= 0)
    assert np.linalg.norm(V @ np.diag(vals) @ V.conj().T - H, 2) <= 1e-9 * scale
    assert np.allclose(V.conj().T @ V, np.eye(n), atol=1e-10)
    # independent oracle: LAPACK
    assert np.allclose(vals, np.linalg.eigvalsh(H), atol=1e-10 * scale)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 20), st.floats(-50, 50))
def test_real_shift(seed, n, c):
    H = _hermitian(seed, n)
    assert np.allclose(hermitian_eigvals(H + c * np.eye(n)), hermitian_eigvals(H) + c, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=8), st.integers(0, 2**32 - 1))
def test_rayleigh_of_diagonal_is_convex_combination(d, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(len(d)) + 1j * rng.standard_normal(len(d))
    x /= np.linalg.norm(x)
    z = rayleigh(np.diag(d), x)
    w = np.abs(x) ** 2
    assert abs(z - np.dot(w, d)) <= 1e-12 * (1 + max(abs(v) for v in d))


def test_block_structure_and_ties():
    H = np.diag([3.0, 1.0, 3.0, -2.0]).astype(complex)
    H[1, 3] = H[3, 1] = 0.5
    vals, V = hermitian_eig(H)
    assert np.allclose(vals, np.linalg.eigvalsh(H), atol=1e-14)
    assert np.allclose(H @ V, V * vals, atol=1e-13)
    top, W = top_eigenspace(H, 1e-10)
    assert W.shape == (4, 2)
    assert np.allclose(H @ W, 3 * W, atol=1e-13)


def test_top_eigenspace_large_uses_inverse_iteration():
    n = 80
    rng = np.random.default_rng(5)
    d = np.sort(rng.standard_normal(n))
    d[-1] = d[-2] + 1e-13  # a numerically double top eigenvalue
    T = np.diag(d) + np.diag(np.full(n - 1, 1e-3), 1) + np.diag(np.full(n - 1, 1e-3), -1)
    vals, V = top_eigenspace(T.astype(complex), 1e-8)
    ref = np.linalg.eigvalsh(T)
    assert np.allclose(vals, ref, atol=1e-12)
    assert V.shape[1] == int(np.sum(ref >= ref[-1] - 1e-8))
    assert np.allclose(V.conj().T @ V, np.eye(V.shape[1]), atol=1e-10)
    assert np.allclose(T @ V, V * ref[-V.shape[1]:], atol=1e-10)


def test_parts_and_rotation():
    A = np.array([[1 + 2j, 3], [1j, -1]])
    assert np.allclose(real_part(A) + 1j * imag_part(A), A)
    assert linalg.is_hermitian(real_part(A)) and linalg.is_hermitian(imag_part(A))
    assert np.allclose(rotate(A, np.pi / 2), -1j * A)


def test_errors():
    with pytest.raises(DimensionError):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(DimensionError):
        as_matrix(np.zeros((0, 0)))
    with pytest.raises(PreconditionError):
        as_matrix([[np.nan]])
    with pytest.raises(PreconditionError):
        hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(PreconditionError):
        rayleigh(np.eye(2), [1.0, 1.0])


def test_near_hermitian_input_is_symmetrised():
    H = _hermitian(1, 6)
    H[0, 1] += 1e-14
    vals = hermitian_eigvals(H)
    assert np.allclose(vals, np.linalg.eigvalsh(0.5 * (H + H.conj().T)), atol=1e-12)
