from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from numrange import _backend

BACKENDS = _backend.available()


@pytest.fixture(params=sorted(BACKENDS))
def kern(request):
    return BACKENDS[request.param]


def _hermitian(rng, n):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (X + X.conj().T)


def _tridiag(d, e):
    return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


def test_compiled_backend_builds():
    # the extension is part of the build; its absence means the fallback is silently in use
    assert "compiled" in BACKENDS
    assert _backend.NAME == ("python" if os.environ.get("NUMRANGE_PURE_PYTHON", "") not in ("", "0")
                             else "compiled")


@pytest.mark.parametrize("n", [3, 4, 7, 16])
def test_tridiagonalize_reconstructs(kern, rng, n):
    H = _hermitian(rng, n)
    d, e, refl = kern.tridiagonalize(H.copy())
    T = np.diag(d).astype(complex) + np.diag(e, -1) + np.diag(e.conj(), 1)
    Q = np.eye(n, dtype=complex)
    kern.apply_reflectors(refl, Q)
    assert np.allclose(Q.conj().T @ Q, np.eye(n), atol=1e-12)
    assert np.allclose(Q @ T @ Q.conj().T, H, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 30])
def test_tql_matches_lapack(kern, rng, n):
    d = rng.standard_normal(n)
    e = rng.standard_normal(max(n - 1, 0))
    T = _tridiag(d, e)
    dd, ee = d.copy(), e.copy()
    zt = np.eye(n)
    assert kern.tql(dd, ee, zt) == -1
    order = np.argsort(dd)
    assert np.allclose(dd[order], np.linalg.eigvalsh(T), atol=1e-12)
    # rows of zt are eigenvectors
    assert np.allclose(zt @ T, dd[:, None] * zt, atol=1e-11)


def test_shifted_solve(kern, rng):
    n = 9
    d, e = rng.standard_normal(n), rng.standard_normal(n - 1)
    b = rng.standard_normal(n)
    x = kern.shifted_solve(d, e, 0.37, b)
    assert np.allclose(_tridiag(d, e) @ x - 0.37 * x, b, atol=1e-10)


def test_shifted_solve_at_eigenvalue_returns_eigendirection(kern):
    d, e = np.array([2.0, 2.0]), np.array([1.0])
    x = kern.shifted_solve(d, e, 3.0, np.array([1.0, 0.3]))
    x = x / np.linalg.norm(x)
    assert abs(abs(x[0]) - abs(x[1])) < 1e-8


def test_backends_agree(rng):
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    H = _hermitian(rng, 12)
    out = {name: mod.tridiagonalize(H.copy()) for name, mod in BACKENDS.items()}
    (d1, e1, r1), (d2, e2, r2) = out.values()
    assert np.allclose(d1, d2, atol=1e-13) and np.allclose(e1, e2, atol=1e-13)


def test_environment_variable_forces_python():
    env = dict(os.environ, NUMRANGE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import numrange; print(numrange.backend)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
