import random
from fractions import Fraction

import pytest
from conftest import assert_digits, oracle
from draws import THEOREMS, compare, draw
from hypothesis import given, settings
from hypothesis import strategies as st

from harmcert.hyper import (
    CAPPED_DIRECT_DIGITS,
    Hyp2F1,
    HypSeriesSpec,
    bailey_half,
    chu_almost_poised,
    cvz_depth,
    cvz_sum,
    dixon_wellpoised,
    gauss_unit,
    luke_digamma,
    luke_reduce_3f2,
    pfq,
    pfq_eval,
    watson_3f2,
)
from harmcert.numcore import DomainError, const_ln2, const_pi, ctx_new
from harmcert.series import SeriesSpec, lin, rational_weight, sum_series
from harmcert.special import gamma

F = Fraction
C30 = ctx_new(30)


def test_binomial_collapse(ctx50):
    v = pfq([F(1, 2), F(7, 3)], [F(7, 3)], F(1, 3), ctx50)
    assert_digits(v, ctx50.real(F(2, 3)) ** ctx50.real(F(-1, 2)), 50)


def test_ccd_3f2_value(ctx30):
    # 3F2[1/2,1,5/4;3/2,7/4;1] = 3 - 6 pi^3 / Gamma(1/4)^4 (about 1.92334)
    closed = 3 - 6 * const_pi(ctx30) ** 3 / gamma(F(1, 4), ctx30) ** 4
    value = pfq([F(1, 2), 1, F(5, 4)], [F(3, 2), F(7, 4)], 1, ctx30)
    assert_digits(value, closed, 30)
    assert_digits(value, oracle("hyp3f2_ccd", ctx30), 30)


def test_ccd_via_watson_reindexing(ctx30):
    lhs = pfq([F(1, 2), 1, F(5, 4)], [F(3, 2), F(7, 4)], 1, ctx30)
    w = pfq([1, F(-1, 2), F(1, 4)], [F(1, 2), F(3, 4)], 1, ctx30)
    assert_digits(lhs, 3 * (1 - w), 30)
    assert_digits(w, watson_3f2(1, F(-1, 2), F(1, 4), ctx30), 30)


def test_terminating():
    out = pfq_eval(HypSeriesSpec.of([-3, 2], [1], 1), C30)
    # 1 - 6 + 9 - 4
    assert out.value == 0 and out.terms_used == 4 and out.tail_bound_estimate == 0


@given(st.integers(1, 12), st.fractions(-1, 1, max_denominator=9))
def test_terminating_term_count(m, x):
    out = pfq_eval(HypSeriesSpec.of([-m, F(1, 3)], [F(5, 2)], x), C30)
    assert out.terms_used == m + 1
    assert out.tail_bound_estimate == 0


def test_gauss_examples(ctx50):
    pi = oracle("pi", ctx50)
    assert_digits(gauss_unit(F(1, 2), F(1, 2), 2, ctx50), 4 / pi, 50)
    assert_digits(gauss_unit(F(1, 2), F(1, 2), F(3, 2), ctx50), pi / 2, 50)
    direct = pfq([F(1, 4), F(1, 4)], [F(3, 2)], 1, C30, "quadrature")
    assert_digits(gauss_unit(F(1, 4), F(1, 4), F(3, 2), C30), direct, 30)


def test_bailey_examples(ctx50):
    expected = ctx50.mp.sqrt(oracle("pi", ctx50)) / oracle("gamma_3_4", ctx50) ** 2
    assert_digits(bailey_half(F(1, 2), 1, ctx50), expected, 50)
    assert bailey_half(1, F(7, 3), ctx50) == 1
    direct = pfq([F(1, 3), F(2, 3)], [F(5, 4)], F(1, 2), ctx50, "direct")
    assert_digits(bailey_half(F(1, 3), F(5, 4), ctx50), direct, 45)


def test_dixon_examples():
    closed = dixon_wellpoised(F(1, 2), F(1, 4), F(1, 4), C30)
    assert_digits(closed, pfq([F(1, 2), F(1, 4), F(1, 4)], [F(5, 4), F(5, 4)], 1, C30), 30)
    assert dixon_wellpoised(F(1, 3), F(1, 5), 0, C30) == 1


def test_chu_examples():
    # 3F2[1/2,3/4,3/4;7/4,7/4;1] = 9 (4 - pi) Gamma(3/4)^2 / (4 sqrt(2 pi))
    mp = C30.mp
    pi = const_pi(C30)
    closed = chu_almost_poised(F(1, 2), F(3, 4), F(3, 4), C30)
    expected = 9 * (4 - pi) * gamma(F(3, 4), C30) ** 2 / (4 * mp.sqrt(2 * pi))
    assert_digits(closed, expected, 30)
    # the same constant as 9 sum (1/4)^n binom(2n,n)/(4n+3)^2
    series = sum_series(SeriesSpec(F(1, 4), 1, rational_weight(den=[lin(4, 3), lin(4, 3)])), C30).value
    assert_digits(closed, 9 * series, 30)
    other = chu_almost_poised(F(1, 3), F(1, 4), F(1, 5), C30)
    assert_digits(other, pfq([F(1, 3), F(1, 4), F(1, 5)], [F(25, 12), F(32, 15)], 1, C30), 30)


def test_chu_zero_upper_parameter():
    # an upper parameter 0 collapses the series to 1
    assert_digits(chu_almost_poised(F(1, 3), F(1, 4), 0, C30), C30.mp.one, 30)


def test_chu_rejects_boundary():
    with pytest.raises(DomainError):
        chu_almost_poised(F(1, 2), 1, F(1, 4), C30)
    with pytest.raises(DomainError):
        chu_almost_poised(F(1, 2), F(7, 4), F(7, 4), C30)


def test_watson_examples():
    v = watson_3f2(1, F(-1, 2), F(1, 4), C30)
    closed = 3 - 6 * const_pi(C30) ** 3 / gamma(F(1, 4), C30) ** 4
    assert_digits(3 * (1 - v), closed, 30)
    assert watson_3f2(0, F(1, 3), F(2, 3), C30) == 1
    assert_digits(watson_3f2(F(1, 2), F(1, 2), 1, C30), pfq([F(1, 2), F(1, 2), 1], [1, 2], 1, C30), 30)


def test_luke_reduce_examples(ctx50):
    direct = pfq([F(1, 2), F(1, 3), 1], [F(3, 2), 2], F(1, 2), ctx50, "direct")
    assert_digits(luke_reduce_3f2(F(1, 2), F(1, 3), F(3, 2), F(1, 2), ctx50), direct, 45)
    with pytest.raises(DomainError):
        luke_reduce_3f2(F(1, 2), F(1, 3), F(3, 2), 0, C30)
    unit = pfq([F(1, 2), F(1, 4), 1], [2, 2], 1, C30)
    assert_digits(luke_reduce_3f2(F(1, 2), F(1, 4), 2, 1, C30), unit, 30)


def test_luke_reduce_approaches_digamma_limit():
    c60 = ctx_new(60)
    eps = F(1, 10**8)
    target = luke_digamma(F(1, 3), F(5, 2), c60)
    for a in (1 + eps, 1 - eps):
        # 3F2[a,1/3,1;5/2,2;1] -> 3F2[1,1,1/3;5/2,2;1]; the error is O(eps)
        v = luke_reduce_3f2(a, F(1, 3), F(5, 2), 1, c60)
        assert abs(v - target) < 1e-7


def test_luke_digamma_examples(ctx50):
    assert_digits(luke_digamma(2, 4, ctx50), ctx50.real(F(3, 2)), 50)
    ln2 = const_ln2(ctx50)
    assert_digits(luke_digamma(F(1, 2), 2, ctx50), 2 * (2 - 2 * ln2), 50)
    direct = pfq([F(1, 2), 1, 1], [2, 2], 1, C30)
    assert_digits(luke_digamma(F(1, 2), 2, C30), direct, 30)


def test_index_shift_value(ctx30):
    pref = 12 * gamma(F(3, 4), ctx30) / (5 * gamma(F(1, 4), ctx30))
    closed = pref * luke_digamma(F(7, 4), F(9, 4), ctx30)
    direct = pfq([F(7, 4), 1, 1], [F(9, 4), 2], 1, ctx30)
    assert_digits(closed, pref * direct, 30)


@given(st.permutations([F(1, 3), F(1, 2), F(5, 7)]), st.permutations([F(9, 4), F(8, 3)]))
def test_permutation_invariance(upper, lower):
    v = pfq(upper, lower, F(1, 3), C30)
    assert_digits(v, pfq([F(1, 3), F(1, 2), F(5, 7)], [F(9, 4), F(8, 3)], F(1, 3), C30), 30)
    u = pfq(upper, lower, 1, C30)
    assert_digits(u, pfq([F(1, 3), F(1, 2), F(5, 7)], [F(9, 4), F(8, 3)], 1, C30), 30)


def test_degenerate_parameters_cancel():
    spec = HypSeriesSpec.of([F(1, 2), F(2, 3), F(7, 5)], [F(7, 5), 2], F(1, 4)).reduced()
    assert spec.upper == (F(1, 2), F(2, 3)) and spec.lower == (2,)


def test_divergence_rejected():
    with pytest.raises(DomainError):
        HypSeriesSpec.of([1, 1], [1], 1)
    with pytest.raises(DomainError):
        HypSeriesSpec.of([1, 1], [2], F(3, 2))
    with pytest.raises(DomainError):
        HypSeriesSpec.of([1], [-2], F(1, 2))
    with pytest.raises(DomainError):
        pfq_eval(HypSeriesSpec.of([1], [2], F(1, 2)), C30, "bogus")


def test_direct_unit_argument_is_capped():
    out = pfq_eval(HypSeriesSpec.of([F(1, 2), 1, F(5, 4)], [F(3, 2), F(7, 4)], 1), C30, "direct")
    assert out.digits_cap == CAPPED_DIRECT_DIGITS
    closed = 3 - 6 * const_pi(C30) ** 3 / gamma(F(1, 4), C30) ** 4
    assert_digits(out.value, closed, CAPPED_DIRECT_DIGITS)


def test_alternating_acceleration(ctx30):
    # 2F1[1,1;2;-1] = ln 2
    out = pfq_eval(HypSeriesSpec.of([1, 1], [2], -1), ctx30, "cvz")
    assert_digits(out.value, const_ln2(ctx30), 30)
    # cvz_sum takes a_k and sums (-1)^k a_k
    value, err = cvz_sum([ctx30.real(F(1, k + 1)) for k in range(cvz_depth(ctx30))], ctx30)
    assert_digits(value, const_ln2(ctx30), 30)
    assert err < ctx30.mp.mpf(10) ** -30


def test_hyp2f1_object(ctx30):
    f = Hyp2F1(F(1, 2), F(1, 2), 1, ctx30)
    assert_digits(f(ctx30.real(F(1, 4))), oracle("hyp2f1_half_half_1_quarter", ctx30), 30)
    # near z = 1 the connection formula is used
    z = ctx30.real(F(99, 100))
    assert_digits(f(z), pfq([F(1, 2), F(1, 2)], [1], F(99, 100), ctx30, "direct"), 30)


@pytest.mark.parametrize("name", sorted(THEOREMS))
@settings(max_examples=8)
@given(seed=st.integers(0, 2**32 - 1))
def test_closed_forms_match_summation(name, seed):
    args, spec = draw(name, random.Random(seed))
    closed, summed = compare(name, args, spec, C30)
    assert_digits(closed, summed, 28)
