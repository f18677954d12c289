"""Reproduce the four worked examples from the gallery and print a summary.

Run with ``python3 scripts/reproduce_examples.py``. Each block prints the
computed quantity next to its closed-form value.
"""

from __future__ import annotations

import argparse
import math
import sys

import numrange as nr
from numrange import geometry


def example1() -> None:
    fam = nr.build("example1").object
    est = nr.ess_range_estimate(fam, [(50, 100), (100, 200), (200, 400)])
    print("example1  diag(exp(i/k))")
    print(f"  Hausdorff(estimate, {{1}}) = {geometry.hausdorff(est.intersection, geometry.Polygon([1.0])):.3e}")
    res = nr.theorem4_experiment(fam, nr.ConvexAnalyticCurve.circle(), [(50, 100), (100, 200), (200, 400)])
    print(f"  tangent at theta=0 meets the estimate: {res['tangent_meets_theta0']}")
    print(f"  hypotheses hold: {res['hypotheses_hold']}  meeting fraction: {res['meeting_fraction']:.3f}")


def example2() -> None:
    fam = nr.build("example2-unit-shift").object
    print("example2  unilateral shift")
    for N in (16, 64, 256):
        mu = nr.support_value(nr.truncate(fam, N), 0.0).mu
        print(f"  N={N:<4d} mu_N(0) = {mu:.15f}   cos(pi/(N+1)) = {math.cos(math.pi / (N + 1)):.15f}")
    res = nr.theorem4_experiment(fam, nr.ConvexAnalyticCurve.circle(), [(16, 32), (32, 64), (64, 128)])
    print(f"  meeting fraction: {res['meeting_fraction']:.3f}  hypotheses hold: {res['hypotheses_hold']}")


def example3() -> None:
    A = nr.build("example3").object
    B = nr.boundary_sweep(A, grid=1024)
    sub = nr.segment_coincidence(B, 0, 2)
    print("example3  diag(0, 1, i)")
    print(f"  [0, 2] meets cl W(A) in [{sub.start:.12g}, {sub.end:.12g}]")
    try:
        nr.ConvexAnalyticCurve.from_segment(0, 2)
    except nr.CurveInvalidError as exc:
        print(f"  segment rejected as a curve: {exc}")


def example4() -> None:
    fam = nr.build("example4").object
    print("example4  diag(1, i, i/2, ...)")
    for theta in (-math.pi / 2, 0.0):
        print(f"  theta={theta:+.4f}: {nr.essential_support_check(fam, theta).verdict}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("which", nargs="*", type=int, metavar="K", help="example numbers 1-4 (default: all)")
    args = ap.parse_args(argv)
    if any(k not in (1, 2, 3, 4) for k in args.which):
        ap.error("examples are numbered 1 to 4")
    for k in args.which or (1, 2, 3, 4):
        (example1, example2, example3, example4)[k - 1]()
    return 0


if __name__ == "__main__":
    sys.exit(main())
