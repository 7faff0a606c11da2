import math

import pytest
from hypothesis import given, strategies as st

from artsha.ffield import lcm
from artsha.orbits import (count_places_of_degree, enumerate_orbits, enumerate_places,
                           maximal_orbit_size, maximal_orbits, nonmaximal_mass, theta_fibers)

CASES = [(7, 1), (7, 2), (7, 3), (11, 1), (11, 2), (13, 1), (13, 2)]


def test_places_over_f7():
    pl = enumerate_places(7, 1)
    assert len(pl) == 6 and all(v.size == 1 for v in pl)


def test_places_over_f49():
    sizes = [v.size for v in enumerate_places(7, 2)]
    assert sizes.count(1) == 6 and sizes.count(2) == 21


def test_orbits_q7_a1_are_vertical():
    orbs = enumerate_orbits(7, 1)
    assert len(orbs) == 12 and all(o.size == 1 for o in orbs)
    assert {o.pr1 for o in orbs} == {1, -1}


def test_orbits_q11_zigzag():
    orbs = enumerate_orbits(11, 1)
    assert all(o.size == 2 for o in orbs)
    assert all(n == 1 for n in theta_fibers(11, 1))
    assert all(o.pr1 is None for o in orbs)


@pytest.mark.parametrize("q,a", CASES)
def test_partitions_are_exact(q, a):
    assert sum(v.size for v in enumerate_places(q, a)) == q ** a - 1
    orbs = enumerate_orbits(q, a)
    assert sum(o.size for o in orbs) == 2 * (q ** a - 1)
    s = 1 if q % 3 == 1 else 2
    places = enumerate_places(q, a)
    for o in orbs:
        assert o.size == lcm(s, places[o.place].size)
    np_ = len(places)
    assert np_ <= len(orbs) <= 2 * np_


@pytest.mark.parametrize("q,a", CASES)
def test_theta_fiber_sizes(q, a):
    places = enumerate_places(q, a)
    s = 1 if q % 3 == 1 else 2
    for v, n in zip(places, theta_fibers(q, a)):
        # two orbits over v unless the j-coordinate is swept along by Frobenius
        assert n == (1 if lcm(s, v.size) == 2 * v.size else 2)


def test_place_counts():
    assert count_places_of_degree(7, 1) == 6
    assert count_places_of_degree(7, 2) == 21
    assert abs(count_places_of_degree(7, 3) - 343 / 3) <= 7 ** 1.5 / (6 / 7)


@given(st.sampled_from([7, 11, 13, 49]), st.integers(1, 8))
def test_prime_number_theorem_bound(q, d):
    n = count_places_of_degree(q, d) + (1 if d == 1 else 0)
    assert abs(n - q ** d / d) <= q ** (d / 2) / (1 - 1 / q)


def test_maximal_orbit_sizes():
    assert maximal_orbit_size(7, 2) == 2
    assert maximal_orbit_size(11, 1) == 2
    assert maximal_orbit_size(11, 3) == 6
    # 2 divides a exactly once: places of degree a and a/2 both give maximal orbits
    sizes = {enumerate_places(11, 2)[o.place].size for o in maximal_orbits(11, 2)}
    assert sizes == {1, 2}


def test_nonmaximal_mass_is_small():
    for q in (7, 11):
        ratios = [nonmaximal_mass(q, a) / q ** (a / 2) for a in (1, 2, 3)]
        assert max(ratios) < 2 * math.sqrt(q)


def test_canonical_representatives_are_least():
    from artsha.orbits import working_field
    F = working_field(7, 2)
    for v in enumerate_places(7, 2):
        assert v.rep == min(F.frobenius_orbit(v.rep, 7))
