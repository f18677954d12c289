"""Time the compiled and pure-Python eigen kernels on the same inputs.

Run with ``python benchmarks/bench_kernels.py [--sizes 8 32 128] [--repeat 5]``.
Each row reports the best of ``repeat`` runs per backend and the speedup.
The end-to-end rows time a full support sweep in a fresh interpreter so
that backend selection happens at import, as in normal use.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from numrange import _backend


def _hermitian(n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (X + X.conj().T)


def kernel_cases(n: int):
    H = _hermitian(n)
    d0, e0, refl = _backend.available()["python"].tridiagonalize(H.copy())
    r = np.abs(e0)
    b = np.ones(n)
    Y = np.eye(n, dtype=complex)
    return {
        "tridiagonalize": lambda k: k.tridiagonalize(H.copy()),
        "tql+vectors": lambda k: k.tql(d0.copy(), r.copy(), np.eye(n)),
        "shifted_solve": lambda k: k.shifted_solve(d0, r, float(d0.max()) + 0.1, b),
        "apply_reflectors": lambda k: k.apply_reflectors(refl, Y.copy()),
    }


def _best(fn, repeat: int) -> float:
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


SWEEP = ("import time, numpy as np, numrange as nr; from numrange import gallery; "
         "A = gallery.build('random({n},1)').object; nr.boundary_sweep(A, grid=32); "
         "t = time.perf_counter(); nr.boundary_sweep(A, grid={grid}); "
         "print(nr.backend, time.perf_counter() - t)")


def sweep_time(n: int, grid: int, pure: bool) -> tuple[str, float]:
    env = dict(os.environ, NUMRANGE_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", SWEEP.format(n=n, grid=grid)], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 32, 128])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--grid", type=int, default=256, help="directions in the end-to-end sweep")
    args = ap.parse_args(argv)

    backends = _backend.available()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is available")
    print(f"{'kernel':<18}{'n':>6}{'python [s]':>14}{'compiled [s]':>14}{'speedup':>10}")
    for n in args.sizes:
        for name, case in kernel_cases(n).items():
            tp = _best(lambda: case(backends["python"]), args.repeat)
            if "compiled" in backends:
                tc = _best(lambda: case(backends["compiled"]), args.repeat)
                print(f"{name:<18}{n:>6}{tp:>14.3e}{tc:>14.3e}{tp / tc:>10.1f}")
            else:
                print(f"{name:<18}{n:>6}{tp:>14.3e}{'-':>14}{'-':>10}")
    print()
    print(f"{'boundary_sweep':<18}{'n':>6}{'python [s]':>14}{'compiled [s]':>14}{'speedup':>10}")
    for n in args.sizes:
        _, tp = sweep_time(n, args.grid, pure=True)
        label, tc = sweep_time(n, args.grid, pure=False)
        if label == "compiled":
            print(f"{'grid=' + str(args.grid):<18}{n:>6}{tp:>14.3e}{tc:>14.3e}{tp / tc:>10.1f}")
        else:
            print(f"{'grid=' + str(args.grid):<18}{n:>6}{tp:>14.3e}{'-':>14}{'-':>10}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
