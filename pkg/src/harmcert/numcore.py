"""Precision contexts, exact harmonic numbers, fundamental constants.

Every real-valued quantity in the package is an ``mpmath`` ``mpf`` bound to a
private ``MPContext`` whose precision is fixed by a :class:`PrecisionContext`.
Contexts are never mutated after creation, so values produced by different
workers never interfere with each other.
"""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Union

from mpmath.ctx_mp import MPContext
from mpmath.libmp import from_rational

Rational = Fraction
Real = Any  # an mpf belonging to some PrecisionContext.mp
Number = Union[int, Fraction, "Real"]

MAX_DIGITS = 10000
LOG2_10 = math.log2(10)
CONSTANT_NAMES = ("pi", "ln2", "euler_gamma")
HARMONIC_KINDS = ("H", "H_alt", "O", "O2", "H2")


class HarmcertError(Exception):
    """Base class for all package errors."""


class DomainError(HarmcertError, ValueError):
    """An argument violates an operation's precondition."""


class ConvergenceError(HarmcertError, ArithmeticError):
    """A series or quadrature failed to converge, or diverges."""


_MP_LOCK = threading.Lock()
_MP_BY_BITS: dict[int, MPContext] = {}


def _mp_for_bits(bits: int) -> MPContext:
    mp = _MP_BY_BITS.get(bits)
    if mp is None:
        with _MP_LOCK:
            mp = _MP_BY_BITS.get(bits)
            if mp is None:
                mp = MPContext()
                mp.prec = bits
                _MP_BY_BITS[bits] = mp
    return mp


@dataclass(frozen=True)
class PrecisionContext:
    requested_decimal_digits: int
    working_bits: int
    guard_bits: int

    def __post_init__(self) -> None:
        if self.requested_decimal_digits < 1:
            raise DomainError("requested_decimal_digits must be positive")
        if self.guard_bits < 32:
            raise DomainError("guard_bits must be at least 32")
        need = math.ceil(self.requested_decimal_digits * LOG2_10) + self.guard_bits
        if self.working_bits < need:
            raise DomainError(f"working_bits {self.working_bits} < required {need}")

    @property
    def mp(self) -> MPContext:
        return _mp_for_bits(self.working_bits)

    @property
    def eps(self):
        return self.mp.ldexp(self.mp.one, -self.working_bits)

    @property
    def tolerance(self):
        """10^-requested as a real in this context."""
        return self.mp.mpf(10) ** (-self.requested_decimal_digits)

    def extended(self, extra_bits: int) -> "PrecisionContext":
        return PrecisionContext(
            self.requested_decimal_digits, self.working_bits + extra_bits, self.guard_bits
        )

    def with_bits(self, bits: int) -> "PrecisionContext":
        return PrecisionContext(
            self.requested_decimal_digits, max(bits, self.working_bits), self.guard_bits
        )

    def real(self, x: Number):
        """Round an int, Fraction or mpf to this context."""
        mp = self.mp
        if isinstance(x, Fraction):
            return mp.make_mpf(from_rational(x.numerator, x.denominator, self.working_bits, "n"))
        if isinstance(x, int):
            return mp.mpf(x)
        return mp.mpf(x)

    def check_finite(self, x, what: str = "value"):
        if not self.mp.isfinite(x):
            raise ConvergenceError(f"{what} is not finite: {x}")
        return x


def ctx_new(decimal_digits: int) -> PrecisionContext:
    """Context for ``decimal_digits`` digits with the default guard policy."""
    if isinstance(decimal_digits, bool) or not isinstance(decimal_digits, int):
        raise DomainError("decimal_digits must be an integer")
    if not 1 <= decimal_digits <= MAX_DIGITS:
        raise DomainError(f"decimal_digits must lie in [1, {MAX_DIGITS}], got {decimal_digits}")
    guard = 32 + math.ceil(math.log2(decimal_digits + 1))
    return PrecisionContext(decimal_digits, math.ceil(decimal_digits * LOG2_10) + guard, guard)


# ---------------------------------------------------------------------------
# fixed-point kernels for the constants; all return round(value * 2**prec)


def _atan_inv(x: int, one: int) -> int:
    total = power = one // x
    x2 = x * x
    k, sign = 1, 1
    while power:
        power //= x2
        k += 2
        sign = -sign
        total += sign * (power // k)
    return total


def _atanh_inv(x: int, one: int) -> int:
    total = power = one // x
    x2 = x * x
    k = 1
    while power:
        power //= x2
        k += 2
        total += power // k
    return total


@functools.lru_cache(maxsize=64)
def _pi_fixed(prec: int) -> int:
    guard = 16
    one = 1 << (prec + guard)
    v = 4 * (4 * _atan_inv(5, one) - _atan_inv(239, one))
    return v >> guard


@functools.lru_cache(maxsize=64)
def _ln2_fixed(prec: int) -> int:
    guard = 16
    one = 1 << (prec + guard)
    v = 18 * _atanh_inv(26, one) - 2 * _atanh_inv(4801, one) + 8 * _atanh_inv(8749, one)
    return v >> guard


@functools.lru_cache(maxsize=64)
def _euler_fixed(prec: int) -> int:
    # Brent-McMillan with n = 2**m so that ln n = m ln 2; error ~ pi exp(-4n).
    guard = 32 + prec.bit_length()
    wp = prec + guard
    one = 1 << wp
    m = max(1, math.ceil(math.log2(prec * math.log(2) / 4 + 8)))
    n = 1 << m
    n2 = n * n
    a = u = -m * _ln2_fixed(wp)
    b = v = one
    k = 1
    while True:
        b = b * n2 // (k * k)
        a = (a * n2 // k + b) // k
        if not a and not b:
            break
        u += a
        v += b
        k += 1
    return ((u << wp) // v) >> guard


_CONSTANT_KERNELS = {"pi": _pi_fixed, "ln2": _ln2_fixed, "euler_gamma": _euler_fixed}


def fundamental_const(name: str, ctx: PrecisionContext):
    """pi, ln 2 or Euler's gamma, correctly rounded (with overwhelming probability)."""
    try:
        kernel = _CONSTANT_KERNELS[name]
    except KeyError:
        raise DomainError(f"unknown constant {name!r}; expected one of {CONSTANT_NAMES}") from None
    prec = ctx.working_bits + 24
    mp = ctx.mp
    return mp.ldexp(mp.mpf(kernel(prec)), -prec)


def const_pi(ctx: PrecisionContext):
    return fundamental_const("pi", ctx)


def const_ln2(ctx: PrecisionContext):
    return fundamental_const("ln2", ctx)


def const_euler(ctx: PrecisionContext):
    return fundamental_const("euler_gamma", ctx)


# ---------------------------------------------------------------------------


def digits_agreed(a, b, cap: int) -> int:
    """Number of leading decimal digits on which ``a`` matches the reference ``b``.

    Computes ``min(cap, floor(-log10(|a-b| / max(1, |b|))))``, clamped at zero.
    Exact equality returns ``cap``.  A relative difference that sits within a few
    ulps above a power of ten is credited with that power (binary rounding of
    decimal inputs would otherwise cost a digit).
    """
    if cap < 1:
        raise DomainError("cap must be positive")
    mp = b.context if hasattr(b, "context") else a.context
    diff = abs(mp.mpf(a) - mp.mpf(b))
    if not diff:
        return cap
    rel = diff / max(mp.one, abs(mp.mpf(b)))
    if not mp.isfinite(rel):
        return 0
    k = int(mp.floor(-mp.log10(rel)))
    slack = 1 + mp.ldexp(mp.one, 8 - mp.prec)
    while rel <= mp.mpf(10) ** (-(k + 1)) * slack:
        k += 1
    return max(0, min(cap, k))


def _harmonic_step(kind: str, i: int) -> Fraction:
    if kind == "H":
        return Fraction(1, i)
    if kind == "H_alt":
        return Fraction(1 if i % 2 else -1, i)
    if kind == "O":
        return Fraction(1, 2 * i - 1)
    if kind == "O2":
        return Fraction(1, (2 * i - 1) ** 2)
    if kind == "H2":
        return Fraction(1, i * i)
    raise DomainError(f"unknown harmonic kind {kind!r}; expected one of {HARMONIC_KINDS}")


def harmonic(kind: str, n: int) -> Fraction:
    """Exact H_n, H'_n (alternating), O_n, O_n^(2) or H_n^(2); zero for n = 0."""
    if kind not in HARMONIC_KINDS:
        raise DomainError(f"unknown harmonic kind {kind!r}; expected one of {HARMONIC_KINDS}")
    if n < 0:
        raise DomainError("n must be nonnegative")
    # common-denominator accumulation avoids a gcd per step
    num, den = 0, 1
    for i in range(1, n + 1):
        step = _harmonic_step(kind, i)
        num = num * step.denominator + step.numerator * den
        den *= step.denominator
    return Fraction(num, den)


def harmonic_sequence(kind: str) -> Iterator[Fraction]:
    """Yield the exact values at n = 0, 1, 2, ... incrementally."""
    _harmonic_step(kind, 1)  # validates kind
    value = Fraction(0)
    i = 0
    while True:
        yield value
        i += 1
        value += _harmonic_step(kind, i)
