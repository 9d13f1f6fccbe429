import math

import numpy as np
import pytest
from hypothesis import given, seed, strategies as st

from toral_rwm.arith import enumerate_lattice_points
from toral_rwm.eigenfn import FourierCoefficients
from toral_rwm.equidist import (
    SpectralMeasure,
    arc_discrepancy,
    arc_discrepancy_bruteforce,
    discrepancy,
    partition_arcs,
    spectral_measure,
    uniformity_gap,
)

# frozen from a pure-python arc scan (independent of the package)
ORACLE_DELTA = {
    5: 1.1806689412034663,
    25: 1.4579931763896017,
    65: 1.3666652134309523,
    325: 1.5760226506847737,
}


@pytest.mark.parametrize("E", sorted(ORACLE_DELTA))
def test_discrepancy_oracle(E):
    assert discrepancy(enumerate_lattice_points(E)).delta == pytest.approx(ORACLE_DELTA[E], abs=1e-12)


@pytest.mark.parametrize("W", [1, 2, 3, 8, 57, 200])
def test_equispaced_is_one(W):
    assert arc_discrepancy(2 * math.pi * np.arange(W) / W) == pytest.approx(1.0, abs=1e-12)


def test_single_atom():
    assert arc_discrepancy([0.3]) == pytest.approx(1.0)


def test_empty_raises():
    with pytest.raises(ValueError):
        arc_discrepancy([])


@seed(201)
@given(st.lists(st.floats(0, 2 * math.pi, exclude_max=True), min_size=1, max_size=60))
def test_fast_equals_bruteforce(angles):
    assert arc_discrepancy(angles) == pytest.approx(arc_discrepancy_bruteforce(angles), abs=1e-9)


@seed(202)
@given(st.lists(st.integers(0, 11), min_size=1, max_size=40))
def test_fast_equals_bruteforce_with_ties(slots):
    angles = 2 * math.pi * np.array(slots) / 12
    assert arc_discrepancy(angles) == pytest.approx(arc_discrepancy_bruteforce(angles), abs=1e-9)


@seed(203)
@given(st.lists(st.floats(0, 2 * math.pi, exclude_max=True), min_size=1, max_size=50), st.floats(-10, 10))
def test_rotation_invariance(angles, shift):
    a = np.array(angles)
    assert arc_discrepancy(a + shift) == pytest.approx(arc_discrepancy(a), abs=1e-7)


@seed(204)
@given(st.lists(st.floats(0, 2 * math.pi, exclude_max=True), min_size=1, max_size=50))
def test_discrepancy_bounds(angles):
    d = arc_discrepancy(angles)
    assert 1.0 - 1e-9 <= d <= len(angles) + 1e-9


def test_arc_counts_small():
    assert partition_arcs(enumerate_lattice_points(25), 4).counts.tolist() == [3, 3, 3, 3]
    assert partition_arcs(enumerate_lattice_points(5), 8).counts.tolist() == [1] * 8


@seed(205)
@given(st.sampled_from([5, 25, 65, 325, 1105, 4225, 105625]), st.sampled_from([2, 4, 6, 8, 12, 16, 30]))
def test_partition_antipodal(E, K):
    lps = enumerate_lattice_points(E)
    part = partition_arcs(lps, K, representative="centre")
    assert part.counts.sum() == lps.W
    for k in range(K // 2):
        mine = {tuple(p) for p in lps.points[part.members(k)].tolist()}
        other = {tuple(p) for p in lps.points[part.members(part.antipode(k))].tolist()}
        assert other == {(-x, -y) for x, y in mine}
        if part.representatives[k] >= 0:
            assert np.array_equal(lps.points[part.representatives[k]], -lps.points[part.representatives[part.antipode(k)]])


def test_partition_rejects_odd_K():
    with pytest.raises(ValueError):
        partition_arcs(enumerate_lattice_points(5), 3)


def test_epsilon1_zero_on_symmetric_quarters():
    assert partition_arcs(enumerate_lattice_points(1105), 4).epsilon1 == 0.0


def test_uniform_measure_gap():
    lps = enumerate_lattice_points(1105)
    mu = spectral_measure(FourierCoefficients.uniform(lps))
    # point set is invariant under rotation by pi/2, so modes 1..3 vanish and mode 4 need not
    gaps = [uniformity_gap(mu, n) for n in (1, 2, 3)]
    assert max(gaps) < 1e-12


def test_spectral_measure_rejects_unnormalized():
    with pytest.raises(ValueError):
        SpectralMeasure(np.array([0.0, 1.0]), np.array([0.5, 0.6]))
