import mpmath
import pytest
from hypothesis import given, strategies as st

from artsha.cyclo import CycInt, cyclotomic_polynomial, embed_complex, ord_frak_p, ring
from artsha.ffield import FieldParams

R = ring(21)
coords = st.lists(st.integers(-50, 50), min_size=12, max_size=12)


def elt(c):
    return CycInt(R, tuple(c))

pytestmark = pytest.mark.usefixtures("high_precision")


def test_phi21_degree_and_geometric_sum():
    assert len(cyclotomic_polynomial(21)) - 1 == 12
    total = R.zero()
    for k in range(21):
        total = total + R.zeta(k)
    assert total.is_zero()
    assert R.zeta(21) == R.one()


def test_rational_integer_collapse():
    assert R.from_int(5).is_rational_integer() == 5
    assert R.zeta(1).is_rational_integer() is None


def test_embedding_basics():
    z, err = embed_complex(R.one(), 128)
    assert abs(z - 1) <= err + mpmath.mpf(2) ** -120
    for k in range(21):
        z, err = R.zeta(k).embed(128)
        assert abs(abs(z) - 1) <= err + mpmath.mpf(2) ** -120


def test_ord_frak_p():
    p7 = FieldParams(7)
    assert ord_frak_p(7, p7) == 1
    assert ord_frak_p(1, p7) == 0
    assert ord_frak_p(343, p7) == 3
    assert ord_frak_p(49, FieldParams(7, 2)) == 1
    with pytest.raises(ValueError):
        ord_frak_p(0, p7)


def test_conductor_mismatch():
    with pytest.raises((ValueError, TypeError)):
        R.one() + ring(33).one()


@given(coords, coords)
def test_difference_of_squares(a, b):
    x, y = elt(a), elt(b)
    assert (x + y) * (x - y) == x * x - y * y


@given(coords)
def test_one_plus_zeta_times_one_minus_zeta(a):
    x = elt(a)
    one, z = R.one(), R.zeta(1)
    assert (one + z) * (one - z) * x == (one - z * z) * x


@given(coords, coords)
def test_conj_is_involutive_ring_map(a, b):
    x, y = elt(a), elt(b)
    assert x.conj().conj() == x
    assert (x * y).conj() == x.conj() * y.conj()


@given(coords)
def test_norm_form_embeds_to_squared_modulus(a):
    x = elt(a)
    z, err = x.embed(200)
    w, werr = (x * x.conj()).embed(200)
    assert abs(w - abs(z) ** 2) <= werr + 2 * err * (abs(z) + err) + mpmath.mpf(2) ** -150


@given(coords, st.sampled_from([k for k in range(1, 21) if k % 3 and k % 7]))
def test_galois_action_matches_embeddings(a, k):
    x = elt(a)
    lhs, err = x.galois(k).embed(200)
    with mpmath.workprec(200):
        root = mpmath.expjpi(mpmath.mpf(2 * k) / 21)
        rhs = sum(c * root ** i for i, c in enumerate(x.coords))
    assert abs(lhs - rhs) <= err + mpmath.mpf(2) ** -150


@given(coords, coords)
def test_multiplication_embeds_multiplicatively(a, b):
    x, y = elt(a), elt(b)
    zx, ex = x.embed(200)
    zy, ey = y.embed(200)
    zxy, exy = (x * y).embed(200)
    assert abs(zxy - zx * zy) <= exy + ex * abs(zy) + ey * abs(zx) + ex * ey + mpmath.mpf(2) ** -150


def test_reduction_is_idempotent():
    wide = list(range(40))
    once = R.reduce(wide)
    assert R.reduce(once) == once
