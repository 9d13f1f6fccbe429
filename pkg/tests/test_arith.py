import math

import numpy as np
import pytest
import sympy
from hypothesis import given, seed, strategies as st

from toral_rwm.arith import (
    Energy,
    admissible_energies,
    brute_force_points,
    enumerate_lattice_points,
    expected_point_count,
    factorize,
    gaussian_split,
    is_prime,
    point_angles,
    sqrt_minus_one,
)

# brute force over |xi_i| <= sqrt(E)
KNOWN_W = {1: 4, 2: 4, 5: 8, 9: 4, 25: 12, 65: 16, 325: 24, 1105: 32, 4225: 36, 105625: 60}


@pytest.mark.parametrize("E,W", sorted(KNOWN_W.items()))
def test_point_counts(E, W):
    lps = enumerate_lattice_points(E)
    assert lps.W == W
    assert lps.as_set() == {tuple(p) for p in brute_force_points(E).tolist()}


def test_small_splits():
    assert (gaussian_split(5).a, gaussian_split(5).b) == (2, 1)
    assert (gaussian_split(13).a, gaussian_split(13).b) == (3, 2)
    assert (gaussian_split(17).a, gaussian_split(17).b) == (4, 1)


def test_split_rejects_bad_primes():
    with pytest.raises(ValueError):
        gaussian_split(7)
    with pytest.raises(ValueError):
        gaussian_split(21)


def test_factorize_rejects_out_of_range():
    for n in (0, -3, 2**63):
        with pytest.raises(ValueError):
            factorize(n)


def test_large_semiprime():
    p, q = 2_147_483_629, 2_147_483_587
    assert factorize(p * q) == sorted([(p, 1), (q, 1)])


@seed(101)
@given(st.integers(1, 2**62))
def test_factorize_matches_sympy(n):
    assert factorize(n) == sorted(sympy.factorint(n).items())


@seed(102)
@given(st.integers(2, 10**9))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@seed(103)
@given(st.sampled_from([p for p in sympy.primerange(5, 200_000) if p % 4 == 1]))
def test_split_is_a_sum_of_squares(p):
    s = sqrt_minus_one(p)
    assert (s * s + 1) % p == 0
    g = gaussian_split(p)
    assert g.a**2 + g.b**2 == p and g.a > g.b >= 1


@seed(104)
@given(st.integers(1, 200_000))
def test_enumeration_matches_brute_force(E):
    lps = enumerate_lattice_points(E)
    assert lps.as_set() == {tuple(p) for p in brute_force_points(E).tolist()}
    if Energy.of(E).admissible:
        assert lps.W == expected_point_count(E)
    else:
        with pytest.raises(ValueError):
            expected_point_count(E)


@seed(105)
@given(st.lists(st.tuples(st.sampled_from([5, 13, 17, 29, 37, 41]), st.integers(1, 3)), min_size=1, max_size=3))
def test_count_formula_on_admissible(parts):
    E = math.prod(p**e for p, e in parts)
    energy = Energy.of(E)
    assert energy.admissible
    lps = enumerate_lattice_points(energy, verify=False)
    assert lps.W == 4 * math.prod(1 + e for _, e in energy.factors)
    # every point lies on the circle
    assert np.all(lps.points[:, 0] ** 2 + lps.points[:, 1] ** 2 == E)


@seed(106)
@given(st.sampled_from(admissible_energies(20_000)))
def test_dihedral_symmetry(E):
    s = enumerate_lattice_points(E).as_set()
    for x, y in list(s):
        assert {(-x, y), (x, -y), (y, x), (-x, -y)} <= s


def test_angles_sorted_in_range():
    psi = point_angles(enumerate_lattice_points(1105))
    assert np.all(np.diff(psi) > 0)
    assert psi[0] >= 0 and psi[-1] < 2 * math.pi


def test_admissible_list():
    adm = admissible_energies(10_000)
    assert adm[:6] == [1, 5, 13, 17, 25, 29]
    assert len(adm) == 1074
    assert all(Energy.of(E).admissible for E in adm)


def test_energy_properties():
    e = Energy.of(105625)
    assert e.factors == ((5, 4), (13, 2))
    assert e.rank == 2 and e.lam == 325.0
    assert not Energy.of(45).admissible
