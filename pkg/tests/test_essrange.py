from __future__ import annotations

import json
import math

import numpy as np
import pytest

from numrange import geometry
from numrange.errors import PreconditionError, UnsupportedError
from numrange.essrange import (block_family, compression, diagonal, ess_oracle, ess_range_estimate,
                               essential_support_check, finite_plus_diagonal, parse_family,
                               parse_schedule, tail_compression, tail_distance_bound, truncate,
                               unit_shift)
from numrange.support import support_value

SCHED = [(50, 100), (100, 200), (200, 400)]


def test_sections_of_diagonal_and_shift():
    # [PAPER] Example 1 entries exp(i/k), Example 4 entries 1, i, i/2, ...
    assert np.allclose(np.diag(truncate(diagonal("exp-i-over-k"), 4)), np.exp(1j / np.arange(1, 5)))
    assert np.allclose(np.diag(truncate(diagonal("one-then-i-over-k"), 4)), [1, 1j, 0.5j, 1j / 3])
    S = truncate(unit_shift(), 5)
    assert np.array_equal(S, np.diag(np.ones(4), -1))
    # compressions of the shift are translation invariant
    assert np.array_equal(tail_compression(unit_shift(), 10, 14), S)
    T = tail_compression(diagonal("i-over-k"), 3, 5)
    assert np.allclose(np.diag(T), [1j / 3, 1j / 4, 1j / 5])


def test_block_family_repeats_blocks():
    fam = block_family([np.array([[1.0]]), np.array([[0, 2], [0, 0]])])
    T = truncate(fam, 6)
    assert T[0, 0] == 1 and T[1, 2] == 2 and T[3, 3] == 1 and T[4, 5] == 2
    with pytest.raises(UnsupportedError):
        ess_oracle(fam)


def test_finite_plus_diagonal_layout():
    fam = finite_plus_diagonal(np.array([[0, 1], [1, 0]]), "i-over-k")
    T = truncate(fam, 4)
    assert np.allclose(T[:2, :2], [[0, 1], [1, 0]])
    assert np.allclose(np.diag(T)[2:], [1j / 3, 1j / 4])


def test_section_monotonicity():
    thetas = 2 * math.pi * np.arange(96) / 96
    for fam in (diagonal("exp-i-over-k"), diagonal("one-then-i-over-k"), unit_shift()):
        prev = None
        for N in (4, 9, 25, 60):
            mus = np.array([support_value(truncate(fam, N), t).mu for t in thetas])
            if prev is not None:
                assert np.all(prev <= mus + 1e-9)
            prev = mus


def test_example1_estimate_nests_and_converges():
    fam = diagonal("exp-i-over-k")
    est = ess_range_estimate(fam, SCHED)
    oracle = ess_oracle(fam)
    dists = [geometry.hausdorff(P, oracle) for P in est.polygons]
    assert all(b <= a + 1e-12 for a, b in zip(dists, dists[1:]))
    # outer approximation up to the distance of the unreached tail to the limit
    for (n, _), P in zip(est.sections, est.polygons):
        slack = tail_distance_bound(fam, n)
        assert all(P.contains(z, tol=slack + 1e-9) for z in oracle.vertices)
    assert geometry.hausdorff(est.intersection, oracle) <= abs(np.exp(1j / 200) - 1) + 1e-12
    assert not est.empty
    assert est.resolution > 0


def test_unit_shift_estimate_approaches_disk():
    est = ess_range_estimate(unit_shift(), [(16, 32), (32, 64), (64, 128)])
    # [DERIVED] each window is a 65-section, a disk of radius cos(pi/66)
    assert geometry.hausdorff(est.intersection, geometry.Disk(0, 1)) == pytest.approx(
        1 - math.cos(math.pi / 66), abs=2e-4)


def test_support_check_verdicts_example4_and_example1():
    fam4 = diagonal("one-then-i-over-k")
    assert essential_support_check(fam4, -math.pi / 2).verdict == "essential"
    assert essential_support_check(fam4, 0.0).verdict == "discrete"
    assert essential_support_check(diagonal("exp-i-over-k"), 0.0).verdict == "essential"


def test_support_check_consistent_with_oracle_on_finite_plus_compact():
    fam = finite_plus_diagonal(np.diag([2.0, -1.0]), "i-over-k")
    oracle = ess_oracle(fam)
    assert np.allclose(oracle.vertices, [0])
    for theta in (0.0, math.pi, math.pi / 2, -math.pi / 2):
        chk = essential_support_check(fam, theta)
        mu = chk.mu_full[-1]
        meets = abs(oracle.support([theta])[0] - mu) <= chk.floor
        assert chk.verdict == ("essential" if meets else "discrete"), theta


def test_oracles():
    assert isinstance(ess_oracle(unit_shift()), geometry.Disk)
    assert np.allclose(ess_oracle(diagonal("one-then-i-over-k")).vertices, [0])


def test_parse_family_and_schedule(tmp_path):
    assert parse_family("diagonal:exp-i-over-k").kind == "diagonal"
    assert parse_family("shift:unit").kind == "weighted-shift"
    doc = {"blocks": [{"n": 1, "entries": [[[1, 0]]]}, {"n": 2, "entries": [[[0, 0], [2, 0]], [[0, 0], [0, 0]]]}]}
    f = tmp_path / "b.json"
    f.write_text(json.dumps(doc))
    fam = parse_family(f"blocks:{f}")
    assert fam.kind == "direct-sum-blocks" and len(fam.blocks) == 2
    g = tmp_path / "m.json"
    g.write_text(json.dumps({"n": 1, "entries": [[[3, 0]]]}))
    assert parse_family(f"finite-plus-diagonal:{g}:i-over-k").finite[0, 0] == 3
    for bad in ("diagonal:nope", "shift:weird", "blocks", "teapot:1"):
        with pytest.raises(PreconditionError):
            parse_family(bad)
    assert parse_schedule("2:4, 4:8") == [(2, 4), (4, 8)]
    for bad in ("3", "a:b", "5:3", "0:4"):
        with pytest.raises(PreconditionError):
            parse_schedule(bad)


def test_compression_rejects_bad_windows():
    with pytest.raises(PreconditionError):
        compression(unit_shift(), 0, 4)
    with pytest.raises(PreconditionError):
        compression(unit_shift(), 5, 4)
