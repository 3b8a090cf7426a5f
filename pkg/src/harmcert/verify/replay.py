"""Step-by-step numeric replay of the H_{2k} proof chain.

Each step compares two routes to the same quantity and records the largest
discrepancy.  Steps that only reindex a sum are marked ``structural``: once
both sides are summed numerically they hold by construction, but they are kept
so the replay mirrors the argument link by link.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

from ..elliptic import IMAGINARY_UNIT, ONE_OVER_SQRT2, ell_e, ell_k, gf_binomsq
from ..hyper import luke_digamma, watson_3f2
from ..numcore import DomainError, PrecisionContext, const_ln2, const_pi, ctx_new
from ..quad import integrate, log_moment, log_moment_digamma, log_moment_quadrature, proof_integral
from ..series import (
    CoefficientSpec,
    GammaRatioSeries,
    HarmonicPart,
    SeriesSpec,
    Weight,
    bisect,
    cauchy_coefficients,
    cauchy_formula,
    lemma1_residual,
    lin,
    sum_series,
)
from ..special import gamma

MAX_REPLAY_DIGITS = 30
ROMAN = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "xiv")


@dataclass
class StepResult:
    index: int
    label: str
    title: str
    lhs: str
    rhs: str
    residual: str
    tolerance: str
    passed: bool
    structural: bool
    seconds: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass
class _Outcome:
    lhs: object
    rhs: object
    residual: object


class _Env:
    """Shared context plus memoised library evaluations used by several steps."""

    def __init__(self, ctx: PrecisionContext):
        self.ctx = ctx
        self.mp = ctx.mp
        self._memo: dict = {}

    def memo(self, key, fn: Callable):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    @property
    def pi(self):
        return const_pi(self.ctx)

    @property
    def ln2(self):
        return const_ln2(self.ctx)

    @property
    def g2(self):
        """Gamma(1/4)^2."""
        return self.memo("g2", lambda: gamma(Fraction(1, 4), self.ctx) ** 2)

    def integral(self, name: str):
        return self.memo(("int", name), lambda: proof_integral(name, self.ctx))

    def lem(self, *den, odd: bool = False):
        """sum (1/4)^n binom(2n,n) [O_{2n}] / prod(den)."""
        harmonic = (HarmonicPart("O", 1, 2, 0),) if odd else ()
        spec = SeriesSpec(Fraction(1, 4), 1, Weight((), tuple(lin(*d) for d in den), 1, harmonic))
        return self.memo(("lem", den, odd), lambda: sum_series(spec, self.ctx).value)

    def rate_half(self, harmonic=(), den=()):
        spec = SeriesSpec(Fraction(1, 32), 2, Weight((), tuple(den), 1, tuple(harmonic)))
        return self.memo(("half", harmonic, den), lambda: sum_series(spec, self.ctx).value)

    def gamma_series(self):
        return self.memo("gs", lambda: bisect(GammaRatioSeries(Fraction(3, 4), Fraction(5, 4)), self.ctx))


def _max_abs(*diffs):
    return max(abs(d) for d in diffs)


# -- the steps -----------------------------------------------------------------


def _lemma(env: _Env) -> _Outcome:
    r = lemma1_residual(CoefficientSpec((1, 1), 0, Fraction(1, 2)), env.ctx)
    return _Outcome(r.lhs, r.rhs, r.residual)


def _elliptic(env: _Env) -> _Outcome:
    ctx, pi, ln2, g2 = env.ctx, env.pi, env.ln2, env.g2
    mp = env.mp
    series = (env.rate_half(den=(lin(1, 1),)) + 2 * ln2 * env.rate_half()) / 2
    elliptic = gf_binomsq(Fraction(1, 32), ctx) / 2 + ln2 * 2 * ell_k(ONE_OVER_SQRT2, ctx) / pi
    closed = 4 * mp.sqrt(pi) / g2 + ln2 * g2 / (2 * pi * mp.sqrt(pi))
    return _Outcome(series, closed, _max_abs(series - elliptic, elliptic - closed))


def _inner_binomial_sum(x, ctx: PrecisionContext):
    """sum (x^2/2)^n binom(2n,n)/4^n (n+1), summed term by term."""
    mp = ctx.mp
    w = x * x / 2
    term = mp.one
    total = mp.zero
    n = 0
    eps = ctx.eps
    while True:
        total += term
        term *= w * (2 * n + 1) * (n + 2) / ((2 * n + 2) * (n + 1))
        n += 1
        if abs(term) < eps * abs(total):
            return total


def _binomial(env: _Env) -> _Outcome:
    ctx, pi = env.ctx, env.pi
    mp = env.mp

    def f(x, xc, c):
        return c.mp.sqrt(xc * (1 + x)) * c.mp.log(x) * _inner_binomial_sum(x, c)

    lhs = 4 * integrate(f, ctx).value / pi
    rhs = -4 / (pi * mp.sqrt(2)) * env.integral("split_total")
    return _Outcome(lhs, rhs, abs(lhs - rhs))


def _split(env: _Env) -> _Outcome:
    lhs = env.integral("split_total")
    rhs = -env.integral("part_flat") - 2 * env.integral("part_heavy")
    return _Outcome(lhs, rhs, abs(lhs - rhs))


def _change(env: _Env) -> _Outcome:
    d1 = env.integral("part_flat") - env.integral("after_change")
    d2 = env.integral("part_heavy") - env.integral("heavy")
    return _Outcome(env.integral("part_flat"), env.integral("after_change"), _max_abs(d1, d2))


def _log_expansion(env: _Env) -> _Outcome:
    lhs = -env.integral("after_change")
    rhs = env.mp.sqrt(env.pi) / 8 * env.gamma_series().full
    return _Outcome(lhs, rhs, abs(lhs - rhs))


def _bisection(env: _Env) -> _Outcome:
    b = env.gamma_series()
    return _Outcome(b.full, b.even + b.odd, b.residual)


def _index_shift(env: _Env) -> _Outcome:
    ctx, pi, g2 = env.ctx, env.pi, env.g2
    mp = env.mp
    shifted = 2 * env.gamma_series().even
    pref = 12 * gamma(Fraction(3, 4), ctx) / (5 * gamma(Fraction(1, 4), ctx))
    via_digamma = pref * luke_digamma(Fraction(7, 4), Fraction(9, 4), ctx)
    closed = -pi * mp.sqrt(pi) * (pi + 2 * env.ln2 - 8) / (4 * mp.sqrt(2) * g2)
    return _Outcome(shifted, via_digamma,
                    _max_abs(shifted - via_digamma, mp.sqrt(pi) / 16 * via_digamma - closed))


def _watson(env: _Env) -> _Outcome:
    ctx, pi, g2, ln2 = env.ctx, env.pi, env.g2, env.ln2
    mp = env.mp
    odd_part = mp.sqrt(pi) / 8 * env.gamma_series().odd
    ccd = 3 * (1 - watson_3f2(1, Fraction(-1, 2), Fraction(1, 4), ctx))
    via_watson = g2 / (24 * mp.sqrt(2 * pi)) * ccd
    lhs = env.integral("split_total")
    rhs = (g2 / (8 * mp.sqrt(2 * pi)) - pi * mp.sqrt(pi) * (pi + ln2 - 4) / (2 * mp.sqrt(2) * g2)
           - 2 * env.integral("part_heavy"))
    return _Outcome(lhs, rhs, _max_abs(odd_part - via_watson, lhs - rhs))


def _cauchy(env: _Env) -> _Outcome:
    mp = env.mp
    exact_mismatch = sum(1 for n, c in enumerate(cauchy_coefficients(60)) if c != cauchy_formula(n))
    # generating function at u = 1/2; |c_n| <= n+1, so 240 terms leave a tail below 2^-230
    u = Fraction(1, 2)
    partial = sum((cauchy_formula(n) * u**n for n in range(241)), Fraction(0))
    lhs = env.ctx.real(partial)
    rhs = 1 / ((1 + env.ctx.real(u)) * mp.sqrt(1 - env.ctx.real(u * u)))
    return _Outcome(lhs, rhs, abs(lhs - rhs) + exact_mismatch)


def _moments(env: _Env) -> _Outcome:
    ctx = env.ctx
    mp = env.mp
    worst = mp.zero
    for n in range(11):
        a, b, c = log_moment(n, ctx), log_moment_digamma(n, ctx), log_moment_quadrature(n, ctx)
        worst = max(worst, abs(a - b), abs(a - c))
    # the Cauchy-product expansion integrated term by term, at Abel radius r = 1/2
    r = Fraction(1, 2)
    rr = ctx.real(r)

    def f(u, uc, c):
        m = c.mp
        return m.sqrt(u) * m.log(uc) / ((1 + rr * u) * m.sqrt((1 - rr * u) * (1 + rr * u)))

    lhs = integrate(f, ctx).value / 4
    total = mp.zero
    n = 0
    while True:
        coef = Fraction(-1, 2) ** n * math.comb(n, n // 2) * (n + 1) * r**n
        term = ctx.real(coef) * log_moment(n, ctx)
        total += term
        if n > 8 and abs(term) < ctx.eps * 1e-3:
            break
        n += 1
    rhs = total / 4
    return _Outcome(lhs, rhs, max(worst, abs(lhs - rhs)))


def _cascade_values(env: _Env) -> dict:
    ctx, pi, ln2, g2 = env.ctx, env.pi, env.ln2, env.g2
    mp = env.mp
    sq2, sqpi = mp.sqrt(2), mp.sqrt(pi)
    pi32 = pi * sqpi
    g4 = g2 * g2
    L = env.lem
    A = g2 / (4 * mp.sqrt(2 * pi))
    B = mp.sqrt(2 * pi**3) / g2
    d = {}
    d["bisected"] = (
        -L((4, 1)) / 8 + (-1 - ln2 / 2) * L((4, 3)) + (13 + 12 * ln2) / 8 * L((4, 5))
        + L((4, 3), (4, 3)) / 2 - Fraction(3, 2) * L((4, 5), (4, 5))
        + L((4, 3), odd=True) / 2 - Fraction(3, 2) * L((4, 5), odd=True)
    )
    tail_a = (13 + 12 * ln2) / 8 * L((4, 5)) - Fraction(3, 2) * L((4, 5), (4, 5)) - Fraction(3, 2) * L((4, 5), odd=True)
    d["lemniscate_AB"] = -A / 8 + (-1 - ln2 / 2) * B + L((4, 3), (4, 3)) / 2 + L((4, 3), odd=True) / 2 + tail_a
    almost = (4 - pi) * gamma(Fraction(3, 4), ctx) ** 2 / (4 * mp.sqrt(2 * pi))
    slov2 = pi32 * (3 * ln2 + 2) / (2 * sq2 * g2)
    d["almost_poised_slovaca2"] = -A / 8 + (-1 - ln2 / 2) * B + almost / 2 + slov2 / 2 + tail_a
    head = (-g4 - 8 * pi**2 * (2 + pi + ln2)) / (32 * mp.sqrt(2 * pi) * g2)
    rest = (Fraction(9, 8) * L((4, -3)) - Fraction(3, 4) * L((4, -1)) - L((2, -1), odd=True) / 2)
    d["reindexed"] = (head + (3 + 4 * ln2) / 8 * L((2, -1)) + (1 + ln2) / 2 * L((4, 1))
                      - L((4, 1), (4, 1)) / 2 + rest - L((4, 1), odd=True) / 2)
    d["catalan"] = head + (1 + ln2) / 2 * L((4, 1)) - L((4, 1), (4, 1)) / 2 + rest - L((4, 1), odd=True) / 2
    g54, g34 = gamma(Fraction(5, 4), ctx), gamma(Fraction(3, 4), ctx)
    d["lemniscate_A"] = head + (1 + ln2) / 2 * sqpi * g54 / g34 - L((4, 1), (4, 1)) / 2 + rest - L((4, 1), odd=True) / 2
    gm14, g14 = gamma(Fraction(-1, 4), ctx), gamma(Fraction(1, 4), ctx)
    dixon_head = lambda c: (2 * pi * gm14 * (2 + pi + ln2) + sq2 * g14**3 * c) / (64 * sqpi * g14)  # noqa: E731
    d["dixon"] = dixon_head(3 - pi + 4 * ln2) + rest - L((4, 1), odd=True) / 2
    d["slovaca1"] = dixon_head(3 - pi + ln2) + rest
    ei_head = (-48 * pi**2 - 8 * pi**3 - 8 * pi**2 * ln2 + g4 * (-1 - pi + ln2)) / (32 * mp.sqrt(2 * pi) * g2)
    d["e_imaginary"] = ei_head + Fraction(9, 8) * L((4, -3)) - Fraction(3, 4) * L((4, -1))
    d["reindexed_again"] = (mp.mpf(3) / 8 - pi32 * (6 + pi + ln2) / (4 * sq2 * g2)
                            + g2 * (-1 - pi + ln2) / (32 * mp.sqrt(2 * pi))
                            - Fraction(3, 16) * L((1, 1)) + Fraction(3, 8) * L((4, 1)) + Fraction(3, 4) * L((4, 3)))
    d["final"] = g2 * (4 - 2 * pi + 2 * ln2) / (64 * mp.sqrt(2 * pi)) - pi32 * (pi + ln2) / (4 * sq2 * g2)
    d["_e_imaginary_gap"] = L((2, -1), odd=True) - ell_e(IMAGINARY_UNIT, ctx)
    return d


def _cascade(env: _Env) -> _Outcome:
    ref = env.integral("part_heavy")
    values = _cascade_values(env)
    gaps = [v - ref for k, v in values.items() if not k.startswith("_")]
    gaps.append(values["_e_imaginary_gap"])
    return _Outcome(ref, values["final"], _max_abs(*gaps))


def _closed_forms(env: _Env) -> _Outcome:
    pi, ln2, g2 = env.pi, env.ln2, env.g2
    mp = env.mp
    sq2, sqpi = mp.sqrt(2), mp.sqrt(pi)
    pi32 = pi * sqpi
    heavy = g2 * (4 - 2 * pi + 2 * ln2) / (64 * mp.sqrt(2 * pi)) - pi32 * (pi + ln2) / (4 * sq2 * g2)
    split = sq2 * pi32 / g2 + (mp.sqrt(pi / 2) / 16 - ln2 / (16 * mp.sqrt(2 * pi))) * g2
    main = (5 * ln2 - pi) * g2 / (8 * pi32)
    from_bailey = (pi - 3 * ln2) * g2 / (8 * pi32)
    main_series = env.rate_half(harmonic=(HarmonicPart("H_alt", 1, 2, 0),))
    bailey_series = env.rate_half(harmonic=(HarmonicPart("H", 1, 2, 0),))
    bygenbin = -4 / (pi * sq2) * split + 4 * sqpi / g2 + g2 * ln2 / (2 * pi32)
    gaps = (
        env.integral("part_heavy") - heavy,
        env.integral("split_total") - split,
        main_series - main,
        bygenbin - main,
        bailey_series - from_bailey,
    )
    return _Outcome(main_series, main, _max_abs(*gaps))


def _combinations(env: _Env) -> _Outcome:
    pi, ln2, g2 = env.pi, env.ln2, env.g2
    mp = env.mp
    h = HarmonicPart
    from_bailey = env.rate_half(harmonic=(h("H", 1, 2, 0),))
    tauraso = env.rate_half(harmonic=(h("H", 1, 1, 0),))
    sun2_series = env.rate_half(harmonic=(h("H", 2, 2, 0), h("H", -1, 1, 0)))
    sun2 = ln2 * g2 / (4 * pi * mp.sqrt(pi))
    combo2 = 2 * from_bailey - tauraso

    def alt(parts):
        return sum_series(SeriesSpec(Fraction(-1, 16), 2, Weight((), (), 1, parts)), env.ctx).value

    combo1 = 2 * alt((h("H", 1, 2, 0),)) - alt((h("H", 1, 1, 0),))
    sun1_series = alt((h("H", 2, 2, 0), h("H", -1, 1, 0)))
    sun1 = -ln2 * g2 / (4 * pi * mp.sqrt(2 * pi))
    return _Outcome(combo2, sun2, _max_abs(combo2 - sun2_series, sun2_series - sun2, combo1 - sun1,
                                           sun1_series - sun1))


STEPS: tuple = (
    ("order-swap representation with f_n = 2^-n (n+1)", _lemma, False),
    ("elliptic generating function and singular values", _elliptic, False),
    ("generalized-binomial reduction of the inner sum", _binomial, False),
    ("integral split", _split, False),
    ("change of variables 1 - x^2 = u", _change, False),
    ("term-by-term logarithm expansion", _log_expansion, False),
    ("series bisection of the gamma-quotient sum", _bisection, True),
    ("index shift and digamma 3F2 evaluation", _index_shift, True),
    ("Watson-derived 3F2(1) substitution", _watson, False),
    ("Cauchy-product coefficients", _cauchy, False),
    ("digamma moment formulas", _moments, False),
    ("lemniscate-like cascade for the remaining integral", _cascade, False),
    ("final closed forms", _closed_forms, False),
    ("closing linear combinations", _combinations, False),
)


class ReplayFailure(Exception):
    def __init__(self, step: StepResult, completed: list):
        super().__init__(f"step {step.index} ({step.label}) {step.title}: "
                         f"lhs {step.lhs} vs rhs {step.rhs}, residual {step.residual}")
        self.step = step
        self.completed = completed


def replay_proof(digits: int, halt: bool = True) -> list[StepResult]:
    """Run the fourteen checks in order; with ``halt`` the first failure raises ReplayFailure."""
    if not 1 <= digits <= MAX_REPLAY_DIGITS:
        raise DomainError(f"replay supports 1..{MAX_REPLAY_DIGITS} digits")
    env = _Env(ctx_new(digits))
    mp = env.mp
    results = []
    for i, (title, fn, structural) in enumerate(STEPS):
        start = time.perf_counter()
        out = fn(env)
        tol = mp.mpf(10) ** (-digits) * max(mp.one, abs(out.rhs))
        step = StepResult(
            index=i + 1, label=ROMAN[i], title=title,
            lhs=mp.nstr(out.lhs, digits + 2, strip_zeros=False),
            rhs=mp.nstr(out.rhs, digits + 2, strip_zeros=False),
            residual=mp.nstr(out.residual, 3), tolerance=mp.nstr(tol, 3),
            passed=bool(out.residual < tol), structural=structural,
            seconds=round(time.perf_counter() - start, 3),
        )
        results.append(step)
        if halt and not step.passed:
            raise ReplayFailure(step, results)
    return results


def step_count() -> int:
    return len(STEPS)


def replay_report(digits: int, results: list) -> dict:
    return {
        "schema_version": 1,
        "requested_digits": digits,
        "steps": [r.to_dict() for r in results],
        "summary": {"total": len(STEPS), "completed": len(results), "passed": sum(r.passed for r in results)},
    }
