import numpy as np
import pytest
from hypothesis import given, strategies as st

from artsha.ffield import (FieldParams, ExtField, field_suite, factorize, is_irreducible,
                           lowest_irreducible, prime_power)


def suite(q, n):
    return field_suite(FieldParams.from_q(q), n)


def test_params_reject_small_and_composite():
    with pytest.raises(ValueError):
        FieldParams(5)
    with pytest.raises(ValueError):
        FieldParams(9)
    assert FieldParams(5, min_char=5).q == 5
    assert FieldParams.from_q(49).e == 2


def test_prime_power():
    assert prime_power(343) == (7, 3)
    assert factorize(48) == {2: 4, 3: 1}
    with pytest.raises(ValueError):
        prime_power(12)


def test_prime_field_enumeration():
    F = suite(7, 1)
    assert len(F.elements()) == 7


def test_frobenius_fixes_every_element():
    F = suite(7, 2)
    x = F.elements()
    assert np.array_equal(F.pow(x, 49), x)


def test_multiplicative_group_of_f49():
    F = suite(7, 2)
    g = F.primitive_element()
    assert F.order == 48
    orders = [k for k in range(1, 49) if (g ** k).enc == 1]
    assert orders[0] == 48


def test_moduli_are_lowest_irreducible():
    assert lowest_irreducible(7, 1) == (0, 1)
    f = lowest_irreducible(7, 2)
    assert is_irreducible(list(f), 7)
    smaller = [(c0, c1, 1) for c1 in range(7) for c0 in range(7)
               if (c1, c0) < (f[1], f[0])]
    assert not any(is_irreducible(list(g), 7) for g in smaller)
    with pytest.raises(ValueError):
        ExtField(7, 2, modulus=(1, 2, 1))  # (x + 1)^2


def test_trace_and_norm_of_prime_field_elements():
    F = suite(7, 2)
    sub = F.subfield_elements(1)
    assert np.array_equal(F.trace(sub), F.add(sub, sub))
    nz = sub[sub != 0]
    assert np.array_equal(F.norm(nz), F.mul(nz, nz))


def test_trace_additive_character_orthogonality():
    F = suite(7, 2)
    t = F.digits(F.trace(F.elements()))[:, 0]
    z = np.exp(2j * np.pi * t / 7).sum()
    assert abs(z) < 1e-9


def test_norm_is_onto_prime_field():
    F = suite(7, 2)
    nz = F.elements()[1:]
    img = set(int(x) for x in F.norm(nz))
    assert img == set(int(x) for x in F.subfield_elements(1)[1:])


def test_frobenius_orbits_partition_f49():
    F = suite(7, 2)
    seen, sizes = set(), []
    for x in range(1, 49):
        if x in seen:
            continue
        orb = F.frobenius_orbit(x)
        seen.update(orb)
        sizes.append(len(orb))
    assert sizes.count(1) == 6 and sizes.count(2) == 21


def test_trace_transitivity():
    F = suite(7, 4)
    x = np.arange(0, F.size, 37)
    y = F.trace(x, 2)
    # Tr_{F_49/F_7}(y) = y + y^7 for y in the intermediate field
    assert np.array_equal(F.add(y, F.pow(y, 7)), F.trace(x, 1))


def test_embedding_commutes_with_arithmetic_and_frobenius():
    small, big = suite(7, 2), suite(7, 4)
    emb = big.embedding_from(small)
    x, y = small.elements(), small.elements()[::-1]
    assert np.array_equal(emb[small.mul(x, y)], big.mul(emb[x], emb[y]))
    assert np.array_equal(emb[small.add(x, y)], big.add(emb[x], emb[y]))
    assert np.array_equal(emb[small.pow(x, 7)], big.pow(emb[x], 7))
    assert set(emb.tolist()) == set(big.subfield_elements(2).tolist())


def test_subfield_checks():
    F = suite(7, 4)
    with pytest.raises(ValueError):
        F.trace(3, 3)
    assert F.in_subfield(int(F.subfield_elements(2)[5]), 2)


def test_metadata_is_reproducible():
    assert suite(11, 2).metadata() == ExtField(11, 2).metadata()


@given(st.integers(0, 342), st.integers(0, 342), st.integers(1, 342))
def test_field_axioms_f343(a, b, c):
    F = suite(7, 3)
    A, B, C = F.element(a), F.element(b), F.element(c)
    assert (A + B) * C == A * C + B * C
    assert C * C.inverse() == F.element(1)
    assert A ** 343 == A
    assert (A - B) + B == A


@given(st.integers(1, 2400), st.integers(1, 2400))
def test_norm_multiplicative(a, b):
    F = suite(7, 4)
    assert int(F.norm(F.mul(a, b), 2)) == int(F.mul(F.norm(a, 2), F.norm(b, 2)))
