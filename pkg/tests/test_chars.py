from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from artsha.chars import (CharacterContext, dickson, gauss_valuation, kappa_split)
from artsha.family import get_level
from artsha.orbits import working_field


@pytest.fixture(scope="module")
def ctx7():
    return CharacterContext(working_field(7, 1), 7)


@pytest.fixture(scope="module")
def ctx49():
    return CharacterContext(working_field(7, 2), 7)

pytestmark = pytest.mark.usefixtures("high_precision")


def test_kloosterman_over_f7_at_one(ctx7):
    kl = ctx7.kloosterman_sum(1, ctx7.sub_log(1, 1))
    want = -(ctx7.zetap(2) + ctx7.zetap(5) + ctx7.zetap(1) * 2 + ctx7.zetap(6) * 2)
    assert kl == want


def test_gauss_sum_modulus_sqrt7(ctx7):
    g = ctx7.gauss_sum(1, 1, 0)
    z, err = g.embed(128)
    assert err < mpmath.mpf(10) ** -20
    assert abs(abs(z) - mpmath.sqrt(7)) < mpmath.mpf(10) ** -20
    assert g * g.conj() == ctx7.ring.from_int(7)


def test_trivial_character_sum_is_one(ctx49):
    for d in (1, 2):
        for b in (0, 5, 11):
            assert ctx49.additive_sum(d, b) == ctx49.ring.one()


def test_gauss_twist_identity(ctx49):
    base = ctx49.gauss_sum(2, 1, 0)
    for k in range(0, 48, 5):
        x = ctx49.field.exp[k]
        twist = ctx49.zeta3(-ctx49.chi_exponent(2, 1, x))
        assert ctx49.gauss_sum(2, 1, k) == twist * base


def test_hasse_davenport(ctx49):
    for j in (1, 2):
        for k in range(6):
            assert ctx49.gauss_sum(2, j, k * 8) == ctx49.gauss_sum(1, j, k) ** 2


def test_kloosterman_extension(ctx49):
    for k in range(6):
        kl = ctx49.kloosterman_sum(1, k)
        assert ctx49.kloosterman_sum(2, 8 * k) == dickson(kl, 7, 2)


def test_kloosterman_frobenius_invariance(ctx49):
    for b in range(48):
        assert ctx49.kloosterman_sum(2, b) == ctx49.kloosterman_sum(2, (7 * b) % 48)


def test_kloosterman_reality_and_weil(ctx49):
    for b in range(48):
        kl = ctx49.kloosterman_sum(2, b)
        assert kl.conj() == kl
        z, _ = kl.embed()
        assert abs(z) < 2 * 7


def test_kappa_split_vieta():
    level = get_level(7, 2)
    for v in level.kloosterman_values:
        qd = 7 ** v.size
        tol = mpmath.mpf(2) ** -200 * qd
        z, _ = v.value.embed()
        assert abs(v.kappa1 * v.kappa2 - qd) < tol
        assert abs(v.kappa1 + v.kappa2 - z.real) < tol
        assert 0 <= mpmath.arg(v.kappa1) <= mpmath.pi
        assert abs(z.real - 2 * mpmath.sqrt(qd) * mpmath.cos(v.angle)) < tol
        assert 0 < v.angle < mpmath.pi


def test_kappa_split_degenerate_zero():
    R = get_level(7, 1).ring
    v = kappa_split(R.zero(), 7, 1)
    assert v.angle == mpmath.pi / 2


def test_gauss_valuation_closed_form():
    assert gauss_valuation(1, 7, 1) == Fraction(2, 3)
    assert gauss_valuation(2, 7, -1) == Fraction(2, 3)
    assert gauss_valuation(2, 11) == 1
    with pytest.raises(ValueError):
        gauss_valuation(1, 7)


@given(st.integers(1, 12), st.sampled_from([7, 13, 19, 49]), st.sampled_from([1, -1]))
def test_stickelberger_window(size, q, pr1):
    v = gauss_valuation(size, q, pr1 if q % 3 == 1 else None)
    assert Fraction(size, 3) <= v <= Fraction(2 * size, 3)


def test_gauss_angles_q_two_mod_three():
    level = get_level(11, 1)
    for i in range(len(level.orbits)):
        r = level.epsilon(i) / (mpmath.pi / 3)
        assert abs(r - mpmath.nint(r)) < mpmath.mpf(10) ** -40


def test_gauss_constant_along_orbit():
    level = get_level(7, 2)
    ctx = level.ctx
    for o, g in zip(level.orbits, level.gammas):
        a0 = o.log // ctx.step(o.size)
        order = 7 ** o.size - 1
        nxt = (a0 * pow(7, o.size - 1, order)) % order
        assert ctx.gauss_sum(o.size, (7 * o.j) % 3, nxt) == g


def test_psi_twist_rejects_multiple_of_p():
    with pytest.raises(ValueError):
        CharacterContext(working_field(7, 1), 7, psi_scale=7)


def test_cubic_character_norm_compatible(ctx49):
    F = ctx49.field
    for x in range(1, 49, 3):
        n = int(F.norm(x, 1))
        assert ctx49.chi_exponent(1, 1, n) == ctx49.chi_exponent(2, 1, x)
