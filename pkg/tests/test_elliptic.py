from fractions import Fraction

import pytest
from conftest import assert_digits, oracle
from hypothesis import given
from hypothesis import strategies as st

from harmcert.elliptic import IMAGINARY_UNIT, ONE_OVER_SQRT2, Modulus, ell_e, ell_k, ell_ke, gf_binomsq
from harmcert.hyper import pfq
from harmcert.numcore import DomainError, const_pi, ctx_new
from harmcert.quad import catalog_integral
from harmcert.series import SeriesSpec, lin, rational_weight, sum_series
from harmcert.special import gamma

F = Fraction
C30 = ctx_new(30)


def _closed_k(ctx):
    return gamma(F(1, 4), ctx) ** 2 / (4 * ctx.mp.sqrt(const_pi(ctx)))


def _closed_e(ctx):
    mp = ctx.mp
    pi, g2 = const_pi(ctx), gamma(F(1, 4), ctx) ** 2
    return g2 / (8 * mp.sqrt(pi)) + pi * mp.sqrt(pi) / g2


def test_k_e_at_zero(ctx50):
    half_pi = oracle("pi", ctx50) / 2
    assert_digits(ell_k(0, ctx50), half_pi, 50)
    assert_digits(ell_e(0, ctx50), half_pi, 50)


def test_singular_values(ctx50):
    assert_digits(ell_k(ONE_OVER_SQRT2, ctx50), _closed_k(ctx50), 50)
    assert_digits(ell_e(ONE_OVER_SQRT2, ctx50), _closed_e(ctx50), 50)
    assert_digits(ell_k(ONE_OVER_SQRT2, ctx50), oracle("ell_k_inv_sqrt2", ctx50), 50)
    assert_digits(ell_e(ONE_OVER_SQRT2, ctx50), oracle("ell_e_inv_sqrt2", ctx50), 50)


def test_singular_values_1000_digits():
    c = ctx_new(1000)
    assert_digits(ell_k(ONE_OVER_SQRT2, c), _closed_k(c), 1000)


def test_k_half_against_hypergeometric(ctx30):
    expected = const_pi(ctx30) / 2 * pfq([F(1, 2), F(1, 2)], [1], F(1, 4), ctx30)
    assert_digits(ell_k(F(1, 2), ctx30), expected, 30)
    assert_digits(ell_k(F(1, 2), ctx30), oracle("ell_k_half", ctx30), 30)


@given(st.fractions(0, F(9, 10), max_denominator=50))
def test_agm_matches_hypergeometric(k):
    expected = const_pi(C30) / 2 * pfq([F(1, 2), F(1, 2)], [1], k * k, C30)
    assert_digits(ell_k(k, C30), expected, 30)
    ek = const_pi(C30) / 2 * pfq([F(-1, 2), F(1, 2)], [1], k * k, C30)
    assert_digits(ell_e(k, C30), ek, 30)


def test_legendre_at_singular_modulus(ctx50):
    # 2EK - K^2 = pi/2 at k = 1/sqrt(2)
    k, e = ell_ke(ONE_OVER_SQRT2, ctx50)
    assert_digits(2 * e * k - k * k, const_pi(ctx50) / 2, 50)
    ck, ce = _closed_k(ctx50), _closed_e(ctx50)
    assert_digits(2 * ce * ck - ck * ck, const_pi(ctx50) / 2, 50)


def _five_point(fn, k, h):
    return (fn(k - 2 * h) - 8 * fn(k - h) + 8 * fn(k + h) - fn(k + 2 * h)) / (12 * h)


@pytest.mark.parametrize("kq", ["0.3", "0.5", "inv_sqrt2", "0.9"])
def test_derivative_odes(kq):
    c = ctx_new(60)
    mp = c.mp
    k = 1 / mp.sqrt(2) if kq == "inv_sqrt2" else mp.mpf(kq)
    h = mp.mpf(10) ** -10
    kk, ee = ell_ke(Modulus(k), c)
    dk = _five_point(lambda x: ell_k(Modulus(x), c), k, h)
    de = _five_point(lambda x: ell_e(Modulus(x), c), k, h)
    assert abs(de - (ee - kk) / k) < 1e-20
    assert abs(dk - (ee - (1 - k * k) * kk) / (k * (1 - k * k))) < 1e-20


def test_e_imaginary(ctx30):
    transformed = ell_e(IMAGINARY_UNIT, ctx30)
    assert_digits(transformed, catalog_integral("e_imaginary", ctx30).value, 30)
    assert_digits(transformed, oracle("ell_e_imaginary", ctx30), 30)
    assert_digits(transformed, ctx30.mp.sqrt(2) * ell_e(ONE_OVER_SQRT2, ctx30), 30)


def test_gf_binomsq(ctx50):
    assert_digits(gf_binomsq(F(1, 32), ctx50), oracle("gf_binomsq_1_32", ctx50), 50)
    assert_digits(gf_binomsq(F(1, 64), ctx50), oracle("gf_binomsq_1_64", ctx50), 50)
    direct = sum_series(SeriesSpec(F(1, 64), 2, rational_weight(den=[lin(1, 1)])), ctx50).value
    assert_digits(gf_binomsq(F(1, 64), ctx50), direct, 50)
    # the closed constant used in the proof chain
    mp = ctx50.mp
    pi, g2 = const_pi(ctx50), gamma(F(1, 4), ctx50) ** 2
    expected = 8 * mp.sqrt(pi) / g2
    assert_digits(gf_binomsq(F(1, 32), ctx50), expected, 50)


def test_gf_binomsq_small_argument():
    c = ctx_new(20)
    v = gf_binomsq(F(1, 10**6), c)
    assert abs(v - 1) < 3e-6


def test_boundaries():
    with pytest.raises(DomainError):
        ell_k(1, C30)
    with pytest.raises(DomainError):
        ell_k(IMAGINARY_UNIT, C30)
    with pytest.raises(DomainError):
        gf_binomsq(F(1, 16), C30)
    with pytest.raises(DomainError):
        Modulus(token="TWO")
