"""Complete elliptic integrals K and E by the arithmetic-geometric mean."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .numcore import DomainError, PrecisionContext, const_pi


@dataclass(frozen=True)
class Modulus:
    """A modulus k: a number in [0, 1) or one of the exact tokens."""

    k: object = None
    token: str | None = None

    def __post_init__(self) -> None:
        if self.token is not None:
            if self.token not in TOKENS:
                raise DomainError(f"unknown modulus token {self.token!r}")
            return
        k = self.k
        if isinstance(k, int) and not isinstance(k, bool):
            k = Fraction(k)
            object.__setattr__(self, "k", k)
        if not 0 <= k < 1:
            raise DomainError(f"modulus must satisfy 0 <= k < 1, got {k}")

    def k_squared(self, ctx: PrecisionContext):
        """k^2, exact when possible (Fraction) and a real otherwise."""
        if self.token == "ONE_OVER_SQRT2":
            return Fraction(1, 2)
        if self.token == "IMAGINARY_UNIT":
            return Fraction(-1)
        if isinstance(self.k, Fraction):
            return self.k * self.k
        k = ctx.mp.mpf(self.k)
        return k * k


TOKENS = ("ONE_OVER_SQRT2", "IMAGINARY_UNIT")
ONE_OVER_SQRT2 = Modulus(token="ONE_OVER_SQRT2")
IMAGINARY_UNIT = Modulus(token="IMAGINARY_UNIT")

ModulusLike = Union[Modulus, int, Fraction, object]


def as_modulus(m: ModulusLike) -> Modulus:
    if isinstance(m, Modulus):
        return m
    if isinstance(m, str):
        return Modulus(token=m)
    return Modulus(m)


def _agm_ke(k2, ctx: PrecisionContext):
    """(K, E) for 0 <= k^2 < 1 in context ``ctx``; E via the c_n^2 corrections."""
    mp = ctx.mp
    k2r = ctx.real(k2) if isinstance(k2, Fraction) else mp.mpf(k2)
    comp = ctx.real(1 - k2) if isinstance(k2, Fraction) else 1 - k2r
    a, b = mp.one, mp.sqrt(comp)
    tol = 8 * ctx.eps  # a and b can settle a few ulps apart
    power = mp.mpf(0.5)  # 2^(n-1)
    corr = power * k2r
    for _ in range(ctx.mp.prec.bit_length() + 40):
        if abs(a - b) <= tol * a:
            break
        c = (a - b) / 2
        a, b = (a + b) / 2, mp.sqrt(a * b)
        power *= 2
        corr += power * c * c
    kk = const_pi(ctx) / (2 * a)
    return kk, kk * (1 - corr)


def ell_k(m: ModulusLike, ctx: PrecisionContext):
    """K(k) = pi / (2 AGM(1, sqrt(1-k^2)))."""
    mod = as_modulus(m)
    if mod.token == "IMAGINARY_UNIT":
        raise DomainError("K at the imaginary unit is not supported")
    w = ctx.extended(16)
    return ctx.mp.mpf(_agm_ke(mod.k_squared(w), w)[0])


def ell_e(m: ModulusLike, ctx: PrecisionContext):
    """E(k); at k = i through E(i) = sqrt(2) E(1/sqrt(2))."""
    mod = as_modulus(m)
    w = ctx.extended(16)
    if mod.token == "IMAGINARY_UNIT":
        value = w.mp.sqrt(2) * _agm_ke(Fraction(1, 2), w)[1]
    else:
        value = _agm_ke(mod.k_squared(w), w)[1]
    return ctx.mp.mpf(value)


def ell_ke(m: ModulusLike, ctx: PrecisionContext):
    """Both K(k) and E(k) from one AGM run."""
    mod = as_modulus(m)
    if mod.token == "IMAGINARY_UNIT":
        raise DomainError("K at the imaginary unit is not supported")
    w = ctx.extended(16)
    kk, ee = _agm_ke(mod.k_squared(w), w)
    return ctx.mp.mpf(kk), ctx.mp.mpf(ee)


def gf_binomsq(y, ctx: PrecisionContext):
    """Sum of binom(2n,n)^2 y^n/(n+1), via E(4 sqrt y)/(4 pi y) + 4(1 - 1/(16y)) K(4 sqrt y)/pi."""
    y = Fraction(y)
    if not 0 < y < Fraction(1, 16):
        raise DomainError(f"y must lie in (0, 1/16), got {y}")
    # the two terms are each ~1/(8y) and cancel to O(1)
    lost = (y.denominator // max(y.numerator, 1)).bit_length() + 4
    w = ctx.extended(16 + lost)
    mp = w.mp
    kk, ee = _agm_ke(16 * y, w)
    pi = const_pi(w)
    yr = w.real(y)
    value = ee / (4 * pi * yr) + 4 * w.real(1 - 1 / (16 * y)) * kk / pi
    return ctx.mp.mpf(value)
