"""Acceptance suite: one check per acceptance criterion, each reporting a PASS/FAIL line.

Run with pytest (the lines appear in the terminal summary) or directly as a
script, which invokes pytest on this file.
"""

import random
import sys
import time
from fractions import Fraction

import pytest
from conftest import ACCEPTANCE_LINES, assert_digits
from draws import THEOREMS, compare, draw

from harmcert.elliptic import IMAGINARY_UNIT, ONE_OVER_SQRT2, Modulus, ell_e, ell_k, ell_ke
from harmcert.numcore import const_pi, ctx_new, digits_agreed, harmonic
from harmcert.quad import catalog_integral, log_moment, log_moment_digamma, log_moment_quadrature
from harmcert.series import (
    GammaRatioSeries,
    HarmonicPart,
    SeriesSpec,
    Weight,
    bisect,
    bisect_residual,
    cauchy_coefficients,
    cauchy_formula,
    sum_series,
)
from harmcert.special import beta, digamma, gamma
from harmcert.verify import replay_proof, verify_all, verify_one

F = Fraction


def _record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


def test_criterion_1_sun2_50_digits():
    start = time.perf_counter()
    r = verify_one("sun2", 50)
    wall = time.perf_counter() - start
    ok = r.passed and r.digits_agreed >= 50 and r.terms_or_nodes <= 600 and wall < 10
    _record(1, ok, f"sun2 agreed {r.digits_agreed}/50 digits, {r.terms_or_nodes} terms, {wall:.2f}s")


def test_criterion_2_sun1_alternating():
    start = time.perf_counter()
    r = verify_one("sun1", 25)
    wall = time.perf_counter() - start
    ok = r.passed and r.method == "alternating_acceleration" and wall < 30
    _record(2, ok, f"sun1 agreed {r.digits_agreed}/25 digits via {r.method}, {wall:.2f}s")


def test_criterion_3_from_bailey_end_and_combination():
    r = verify_one("from_bailey_end", 50)
    ctx = ctx_new(50)

    def s(*parts):
        return sum_series(SeriesSpec(F(1, 32), 2, Weight(harmonic=parts)), ctx).value

    from_bailey = s(HarmonicPart("H", 1, 2, 0))
    tauraso = s(HarmonicPart("H", 1, 1, 0))
    sun2 = s(HarmonicPart("H", 2, 2, 0), HarmonicPart("H", -1, 1, 0))
    combo = digits_agreed(2 * from_bailey - tauraso, sun2, 50)
    ok = r.passed and combo >= 50
    _record(3, ok, f"from_bailey_end agreed {r.digits_agreed}/50; 2*from_bailey_end - tauraso = sun2 to {combo} digits")


def test_criterion_4_verify_all_30():
    start = time.perf_counter()
    report = verify_all(30, workers=4)
    wall = time.perf_counter() - start
    core = [r for r in report.results if r.method != "positive_unit"]
    failed = [r.id for r in report.results if not r.passed]
    choi = next(r for r in report.results if r.id == "choi_chen")
    ok = (not failed and len(core) >= 24 and choi.passed and choi.effective_digits == 10 and wall < 300)
    _record(4, ok, f"{report.summary['passed']}/{report.summary['total']} records pass "
                   f"({len(core)} non-positive-unit), choi_chen at {choi.effective_digits} digits, "
                   f"{wall:.1f}s; failures {failed or 'none'}")


def test_criterion_5_replay_25():
    steps = replay_proof(25, halt=False)
    worst = max(float(s.residual) for s in steps)
    ok = len(steps) == 14 and all(s.passed for s in steps) and worst < 1e-25
    _record(5, ok, f"{sum(s.passed for s in steps)}/14 steps pass, worst residual {worst:.2e}")


DRAWS_PER_THEOREM = 50


def test_criterion_6_closed_form_theorems():
    ctx = ctx_new(30)
    failures, worst = [], 30
    for name in sorted(THEOREMS):
        rng = random.Random(name)
        for _ in range(DRAWS_PER_THEOREM):
            args, spec = draw(name, rng)
            closed, summed = compare(name, args, spec, ctx)
            agreed = digits_agreed(closed, summed, 30)
            worst = min(worst, agreed)
            if agreed < 25:
                failures.append((name, args, agreed))
    total = DRAWS_PER_THEOREM * len(THEOREMS)
    _record(6, not failures, f"{total - len(failures)}/{total} draws agree to >= 25 digits "
                             f"(worst {worst}); failures {failures[:3] or 'none'}")


def _five_point(fn, k, h):
    return (fn(k - 2 * h) - 8 * fn(k - h) + 8 * fn(k + h) - fn(k + 2 * h)) / (12 * h)


def test_criterion_7_elliptic_suite():
    c50 = ctx_new(50)
    mp = c50.mp
    pi, g2 = const_pi(c50), gamma(F(1, 4), c50) ** 2
    k_closed = g2 / (4 * mp.sqrt(pi))
    e_closed = g2 / (8 * mp.sqrt(pi)) + pi * mp.sqrt(pi) / g2
    dk_agree = digits_agreed(ell_k(ONE_OVER_SQRT2, c50), k_closed, 50)
    de_agree = digits_agreed(ell_e(ONE_OVER_SQRT2, c50), e_closed, 50)

    c60 = ctx_new(60)
    mp60 = c60.mp
    h = mp60.mpf(10) ** -10
    worst_ode = mp60.zero
    for k in (mp60.mpf("0.3"), 1 / mp60.sqrt(2), mp60.mpf("0.9")):
        kk, ee = ell_ke(Modulus(k), c60)
        dk = _five_point(lambda x: ell_k(Modulus(x), c60), k, h)
        de = _five_point(lambda x: ell_e(Modulus(x), c60), k, h)
        worst_ode = max(worst_ode, abs(de - (ee - kk) / k), abs(dk - (ee - (1 - k * k) * kk) / (k * (1 - k * k))))

    c30 = ctx_new(30)
    ei_agree = digits_agreed(ell_e(IMAGINARY_UNIT, c30), catalog_integral("e_imaginary", c30).value, 30)
    ok = dk_agree >= 50 and de_agree >= 50 and worst_ode < 1e-20 and ei_agree >= 30
    _record(7, ok, f"K {dk_agree}/50, E {de_agree}/50 digits; ODE residual {mp60.nstr(worst_ode, 3)}; "
                   f"E(i) vs quadrature {ei_agree}/30 digits")


def _gamma_properties(ctx, rng):
    mp = ctx.mp
    pi = const_pi(ctx)
    for _ in range(40):
        x = F(rng.randint(1, 4800), rng.randint(1, 97))
        u = F(rng.randint(1, 96), 97)
        y = F(rng.randint(1, 4800), rng.randint(1, 97))
        assert_digits(gamma(x + 1, ctx), x * gamma(x, ctx), 30)
        assert_digits(gamma(u, ctx) * gamma(1 - u, ctx) * mp.sin(pi * ctx.real(u)) / pi, mp.one, 30)
        assert_digits(digamma(x + 1, ctx) - digamma(x, ctx) - 1 / ctx.real(x), mp.zero, 30)
        assert_digits(beta(x, y, ctx) * gamma(x + y, ctx), gamma(x, ctx) * gamma(y, ctx), 30)


def _harmonic_properties():
    for n in range(1, 301):
        assert harmonic("H_alt", 2 * n) == harmonic("H", 2 * n) - harmonic("H", n)
        assert harmonic("O", n) == harmonic("H", 2 * n) - harmonic("H", n) / 2


def _bisection_properties(ctx, rng):
    sun2 = SeriesSpec(F(1, 32), 2, Weight(harmonic=(HarmonicPart("H", 2, 2, 0), HarmonicPart("H", -1, 1, 0))))
    assert bisect_residual(sun2, ctx) < ctx.tolerance
    b = bisect(GammaRatioSeries(F(3, 4), F(5, 4)), ctx)
    assert b.residual < ctx.tolerance * abs(b.full)
    for _ in range(10):
        c = F(rng.choice([-1, 1]), rng.choice([5, 8, 32, 64]))
        kind = rng.choice(["H", "O", "H_alt"])
        spec = SeriesSpec(c, 2 if abs(c) < F(1, 16) else 1, Weight(harmonic=(HarmonicPart(kind, 1, 2, 0),)))
        assert bisect_residual(spec, ctx) < ctx.tolerance * max(1, abs(sum_series(spec, ctx).value))


def _cauchy_properties():
    assert cauchy_coefficients(40) == [cauchy_formula(n) for n in range(41)]


def _moment_properties(ctx):
    for n in range(11):
        a = log_moment(n, ctx)
        assert_digits(log_moment_digamma(n, ctx), a, 30)
        assert_digits(log_moment_quadrature(n, ctx), a, 30)


def test_criterion_8_property_suites():
    ctx = ctx_new(30)
    rng = random.Random(8)
    checks = {
        "gamma functional equations": lambda: _gamma_properties(ctx, rng),
        "harmonic identities": _harmonic_properties,
        "bisection residuals": lambda: _bisection_properties(ctx, rng),
        "Cauchy coefficients to n = 40": _cauchy_properties,
        "log_moment triple agreement n <= 10": lambda: _moment_properties(ctx),
    }
    failed = []
    for label, check in checks.items():
        try:
            check()
        except AssertionError as exc:
            failed.append(f"{label}: {exc}")
    _record(8, not failed, f"{len(checks) - len(failed)}/{len(checks)} property suites pass at 30 digits"
                           + (f"; {failed}" if failed else ""))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
