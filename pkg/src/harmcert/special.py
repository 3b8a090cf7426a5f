"""Gamma-family functions for real (rational or mpf) arguments.

log|Gamma| is the primitive: the argument is shifted upward until the Stirling
series converges to working precision, and the shift product is divided out
exactly when the argument is rational.  Arguments below 1/2 go through the
reflection formula.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numcore import (
    DomainError,
    Number,
    PrecisionContext,
    const_euler,
    const_pi,
)

# ---------------------------------------------------------------------------
# Bernoulli numbers B_2, B_4, ... as exact fractions, grown on demand.

_BERNOULLI_LOCK = threading.Lock()
_BERNOULLI: tuple[Fraction, ...] = ()  # _BERNOULLI[k-1] == B_{2k}


def _tangent_numbers(n: int) -> list[int]:
    # Brent-Harvey integer recurrence; t[k] is the k-th tangent number.
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def bernoulli_even(count: int) -> tuple[Fraction, ...]:
    """(B_2, B_4, ..., B_{2*count}); the shared table only ever grows."""
    global _BERNOULLI
    table = _BERNOULLI
    if len(table) >= count:
        return table[:count]
    with _BERNOULLI_LOCK:
        table = _BERNOULLI
        if len(table) < count:
            n = max(count, 2 * len(table), 16)
            t = _tangent_numbers(n)
            table = tuple(
                Fraction((-1) ** (k - 1) * 2 * k * t[k], 4**k * (4**k - 1)) for k in range(1, n + 1)
            )
            _BERNOULLI = table
    return table[:count]


# ---------------------------------------------------------------------------


def _as_exact(x) -> Fraction | None:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return None


def is_nonpositive_integer(x) -> bool:
    q = _as_exact(x)
    if q is not None:
        return q.denominator == 1 and q <= 0
    return x <= 0 and x == int(x)


def _stirling_threshold(bits: int) -> int:
    # x >= 0.6*bits keeps the optimal Stirling truncation above the target
    # with at most a few hundred Bernoulli terms even at 10^4 digits.
    return max(12, int(0.6 * bits))


def _work_ctx(ctx: PrecisionContext, magnitude_bits: int = 0) -> PrecisionContext:
    return ctx.extended(24 + magnitude_bits)


def _stirling_lngamma(x, w: PrecisionContext):
    mp = w.mp
    pi = const_pi(w)
    s = (x - mp.mpf(0.5)) * mp.log(x) - x + mp.log(2 * pi) / 2
    eps = w.eps * abs(s)
    x2 = x * x
    xpow = x
    k = 1
    while True:
        b = bernoulli_even(k)[k - 1]
        term = w.real(b) / (2 * k * (2 * k - 1) * xpow)
        s += term
        if abs(term) < eps:
            return s
        k += 1
        xpow *= x2
        if k > 4 * w.working_bits:
            raise AssertionError("Stirling series failed to converge")


def _stirling_digamma(x, w: PrecisionContext):
    mp = w.mp
    s = mp.log(x) - 1 / (2 * x)
    eps = w.eps * max(mp.one, abs(s))
    x2 = x * x
    xpow = x2
    k = 1
    while True:
        b = bernoulli_even(k)[k - 1]
        term = w.real(b) / (2 * k * xpow)
        s -= term
        if abs(term) < eps:
            return s
        k += 1
        xpow *= x2
        if k > 4 * w.working_bits:
            raise AssertionError("Stirling series failed to converge")


def _sin_pi(x, w: PrecisionContext):
    """sin(pi x) with exact argument reduction for rationals."""
    mp = w.mp
    q = _as_exact(x)
    if q is not None:
        r = q - 2 * math.floor(q / 2)  # r in [0, 2)
        return mp.sin(const_pi(w) * w.real(r))
    return mp.sin(const_pi(w) * mp.mpf(x))


def _cot_pi(x, w: PrecisionContext):
    mp = w.mp
    q = _as_exact(x)
    if q is not None:
        r = q - math.floor(q)
        return mp.cot(const_pi(w) * w.real(r))
    return mp.cot(const_pi(w) * mp.mpf(x))


def _lngamma_positive(x, w: PrecisionContext):
    """log Gamma(x) for x >= 1/2 in context w."""
    mp = w.mp
    threshold = _stirling_threshold(w.working_bits)
    q = _as_exact(x)
    xf = w.real(q) if q is not None else mp.mpf(x)
    shift = max(0, math.ceil(threshold - float(xf)))
    if not shift:
        return _stirling_lngamma(xf, w)
    if q is not None:
        num, den = 1, q.denominator ** shift
        p, d = q.numerator, q.denominator
        for i in range(shift):
            num *= p + i * d
        log_prod = mp.log(mp.mpf(num)) - mp.log(mp.mpf(den))
        big = w.real(q + shift)
    else:
        prod = mp.one
        for i in range(shift):
            prod *= xf + i
        log_prod = mp.log(prod)
        big = xf + shift
    return _stirling_lngamma(big, w) - log_prod


def log_abs_gamma(x: Number, ctx: PrecisionContext):
    """(log|Gamma(x)|, sign of Gamma(x)) at the precision of ``ctx``."""
    if is_nonpositive_integer(x):
        raise DomainError(f"Gamma has a pole at {x}")
    mag = max(8, int(abs(float(x)) + _stirling_threshold(ctx.working_bits))).bit_length() + 4
    w = _work_ctx(ctx, mag)
    mp = w.mp
    if x >= Fraction(1, 2) if _as_exact(x) is not None else x >= 0.5:
        value, sign = _lngamma_positive(x, w), 1
    else:
        # Gamma(x) Gamma(1-x) = pi / sin(pi x)
        one_minus = 1 - x if _as_exact(x) is not None else 1 - mp.mpf(x)
        s = _sin_pi(x, w)
        sign = 1 if s > 0 else -1
        value = mp.log(const_pi(w)) - mp.log(abs(s)) - _lngamma_positive(one_minus, w)
    return ctx.mp.mpf(value), sign


def loggamma(x: Number, ctx: PrecisionContext):
    """log Gamma(x) for Gamma(x) > 0."""
    value, sign = log_abs_gamma(x, ctx)
    if sign < 0:
        raise DomainError(f"Gamma({x}) is negative; use log_abs_gamma")
    return value


def _int_factorial(x) -> int | None:
    q = _as_exact(x)
    if q is not None and q.denominator == 1 and 1 <= q <= 200:
        return math.factorial(int(q) - 1)
    return None


def gamma(x: Number, ctx: PrecisionContext):
    """Gamma(x) for real x off the poles at 0, -1, -2, ..."""
    fact = _int_factorial(x)
    if fact is not None:
        return ctx.mp.mpf(fact)
    value, sign = _log_abs_gamma_wide(x, ctx)
    return ctx.mp.mpf(sign * ctx.mp.exp(value))


def _log_abs_gamma_wide(x: Number, ctx: PrecisionContext):
    # exponentiating needs absolute accuracy in the logarithm
    value, sign = log_abs_gamma(x, ctx.extended(_exp_guard(x)))
    return value, sign


def _exp_guard(x) -> int:
    ax = abs(float(x)) + 2
    return max(4, int(ax * math.log(ax) + 1).bit_length())


def rgamma(x: Number, ctx: PrecisionContext):
    """1/Gamma(x); zero at the poles."""
    if is_nonpositive_integer(x):
        return ctx.mp.zero
    return 1 / gamma(x, ctx)


def digamma(x: Number, ctx: PrecisionContext):
    """psi(x) = Gamma'(x)/Gamma(x)."""
    if is_nonpositive_integer(x):
        raise DomainError(f"digamma has a pole at {x}")
    q = _as_exact(x)
    if q is not None and q.denominator == 1 and q <= 64:
        from .numcore import harmonic

        return ctx.real(harmonic("H", int(q) - 1)) - const_euler(ctx)
    w = _work_ctx(ctx, 8)
    mp = w.mp
    if (q is not None and q < Fraction(1, 2)) or (q is None and x < 0.5):
        # psi(1-x) - psi(x) = pi cot(pi x)
        one_minus = 1 - q if q is not None else 1 - mp.mpf(x)
        value = _digamma_positive(one_minus, w) - const_pi(w) * _cot_pi(x, w)
    else:
        value = _digamma_positive(x, w)
    return ctx.mp.mpf(value)


def _digamma_positive(x, w: PrecisionContext):
    mp = w.mp
    q = _as_exact(x)
    xf = w.real(q) if q is not None else mp.mpf(x)
    threshold = _stirling_threshold(w.working_bits) // 2
    shift = max(0, math.ceil(threshold - float(xf)))
    acc = mp.zero
    for i in range(shift):
        acc += 1 / (xf + i)
    return _stirling_digamma(xf + shift, w) - acc


def beta(x: Number, y: Number, ctx: PrecisionContext):
    """Euler beta function B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y) for x, y > 0."""
    if not (x > 0 and y > 0):
        raise DomainError(f"beta requires positive arguments, got ({x}, {y})")
    return gamma_quotient(GammaQuotientSpec((x, y), (x + y,)), ctx)


@dataclass(frozen=True)
class GammaQuotientSpec:
    """Gamma(n_1)...Gamma(n_r) / (Gamma(d_1)...Gamma(d_s))."""

    numerator_args: tuple
    denominator_args: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "numerator_args", tuple(_normalise(a) for a in self.numerator_args))
        object.__setattr__(
            self, "denominator_args", tuple(_normalise(a) for a in self.denominator_args)
        )
        for a in self.numerator_args + self.denominator_args:
            if is_nonpositive_integer(a):
                raise DomainError(f"gamma quotient argument {a} is a pole")


def _normalise(a):
    q = _as_exact(a)
    return q if q is not None else a


def gamma_quotient(spec: GammaQuotientSpec, ctx: PrecisionContext):
    """Evaluate a gamma quotient through log|Gamma| sums (no intermediate overflow)."""
    guard = max(
        [_exp_guard(a) for a in spec.numerator_args + spec.denominator_args] + [4]
    ) + len(spec.numerator_args + spec.denominator_args).bit_length()
    w = ctx.extended(guard)
    mp = w.mp
    total = mp.zero
    sign = 1
    for a in spec.numerator_args:
        v, s = log_abs_gamma(a, w)
        total += v
        sign *= s
    for a in spec.denominator_args:
        v, s = log_abs_gamma(a, w)
        total -= v
        sign *= s
    return ctx.mp.mpf(sign * mp.exp(total))


def gamma_ratio(numer: Sequence, denom: Sequence, ctx: PrecisionContext):
    """Like gamma_quotient but any pole in ``denom`` makes the result zero."""
    if any(is_nonpositive_integer(d) for d in denom):
        return ctx.mp.zero
    return gamma_quotient(GammaQuotientSpec(tuple(numer), tuple(denom)), ctx)


def pochhammer_exact(a: Fraction, n: int) -> Fraction:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1) as an exact rational."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    a = Fraction(a)
    num, den = 1, a.denominator**n
    for i in range(n):
        num *= a.numerator + i * a.denominator
    return Fraction(num, den)


def pochhammer(a: Number, n: int, ctx: PrecisionContext):
    """(a)_n as a real; exact before rounding when a is rational."""
    q = _as_exact(a)
    if q is not None:
        return ctx.real(pochhammer_exact(q, n))
    if n < 0:
        raise DomainError("n must be nonnegative")
    w = ctx.extended(max(n, 1).bit_length() + 4)
    prod = w.mp.one
    x = w.mp.mpf(a)
    for i in range(n):
        prod *= x + i
    return ctx.mp.mpf(prod)
