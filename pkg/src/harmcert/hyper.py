"""Generalized hypergeometric series and classical summation theorems.

Series with rational parameters are summed in fixed-point integer arithmetic
(the term ratio is an exact rational function of the index).  Unit-argument
series with a small convergence margin go through the Euler integral
representation and tanh-sinh quadrature; alternating unit-argument series
through Cohen-Rodriguez Villegas-Zagier acceleration.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .numcore import (
    ConvergenceError,
    DomainError,
    PrecisionContext,
    const_euler,
    const_pi,
    harmonic,
)
from .quad import integrate
from .special import (
    GammaQuotientSpec,
    digamma,
    gamma_quotient,
    gamma_ratio,
    is_nonpositive_integer,
)

METHODS = ("auto", "direct", "alternating_acceleration", "euler_integral_quadrature")
METHOD_ALIASES = {"cvz": "alternating_acceleration", "quadrature": "euler_integral_quadrature"}
CAPPED_DIRECT_DIGITS = 12
MAX_DIRECT_TERMS = 2_000_000


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return Fraction(x)
    raise DomainError(f"parameter {x!r} must be rational (int, Fraction or 'p/q')")


def _is_npi(q: Fraction) -> bool:
    return q.denominator == 1 and q <= 0


@dataclass(frozen=True)
class HypSeriesSpec:
    """pFq[upper; lower; argument] with rational data."""

    upper: tuple
    lower: tuple
    argument: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "upper", tuple(_frac(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(_frac(b) for b in self.lower))
        object.__setattr__(self, "argument", _frac(self.argument))
        for b in self.lower:
            if _is_npi(b):
                raise DomainError(f"lower parameter {b} is a nonpositive integer")
        self.convergence_class()  # raises on divergence

    @classmethod
    def of(cls, upper: Iterable, lower: Iterable, argument) -> "HypSeriesSpec":
        return cls(tuple(upper), tuple(lower), argument)

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @property
    def margin(self) -> Fraction:
        """s = sum(lower) - sum(upper)."""
        return sum(self.lower, Fraction(0)) - sum(self.upper, Fraction(0))

    @property
    def terminating_index(self) -> Optional[int]:
        """m when the smallest nonpositive-integer upper parameter is -m."""
        ms = [-int(a) for a in self.upper if _is_npi(a)]
        return min(ms) if ms else None

    def convergence_class(self) -> str:
        if self.terminating_index is not None:
            return "terminating"
        x = self.argument
        if self.p <= self.q or abs(x) < 1:
            return "geometric"
        if self.p == self.q + 1 and abs(x) == 1:
            s = self.margin
            if x == 1 and s > 0:
                return "unit"
            if x == -1 and s > -1:
                return "alternating_unit"
        raise DomainError(f"divergent series: {self}")

    def reduced(self) -> "HypSeriesSpec":
        """Cancel upper parameters that coincide with lower ones."""
        up, lo = Counter(self.upper), Counter(self.lower)
        common = up & lo
        if not common:
            return self
        return HypSeriesSpec(
            tuple((up - common).elements()), tuple((lo - common).elements()), self.argument
        )

    def __str__(self) -> str:
        fmt = lambda xs: ", ".join(str(v) for v in xs)  # noqa: E731
        return f"{self.p}F{self.q}[{fmt(self.upper)}; {fmt(self.lower)}; {self.argument}]"


@dataclass(frozen=True)
class SummationOutcome:
    value: object
    terms_used: int
    tail_bound_estimate: object
    method: str
    digits_cap: Optional[int] = None

    def __post_init__(self) -> None:
        if self.tail_bound_estimate < 0:
            raise ValueError("tail bound must be nonnegative")


# ---------------------------------------------------------------------------
# fixed-point term streams


def _ratio_data(upper: Sequence[Fraction], lower: Sequence[Fraction], x: Fraction):
    """Integer polynomials N(n), D(n) with t_{n+1}/t_n = N(n)/D(n)."""
    num_const = x.numerator
    den_const = x.denominator
    for a in upper:
        den_const *= a.denominator
    for b in lower:
        num_const *= b.denominator
    ups = [(a.numerator, a.denominator) for a in upper]
    lows = [(b.numerator, b.denominator) for b in lower]

    def step(n: int) -> tuple[int, int]:
        num, den = num_const, den_const * (n + 1)
        for p, q in ups:
            num *= p + n * q
        for p, q in lows:
            den *= p + n * q
        return num, den

    return step


def _exact_terminating(upper, lower, x, m: int) -> Fraction:
    step = _ratio_data(upper, lower, x)
    term = Fraction(1)
    total = Fraction(1)
    for n in range(m):
        num, den = step(n)
        term = term * num / den
        total += term
    return total


def _turning_index(upper, lower) -> int:
    vals = [abs(v) for v in list(upper) + list(lower)]
    return int(max(vals, default=0)) + 2


def _sum_fixed(upper, lower, x: Fraction, bits: int, eps_bits: int, max_terms: int = MAX_DIRECT_TERMS):
    """Sum a |x| < 1 (or p <= q) series in fixed point.

    Returns (sum, last_term, rho, terms, max_abs_term) as integers scaled by
    2**bits (rho is a Fraction).  Stops when |t_N| rho/(1-rho) falls below
    2**-eps_bits relative to the running sum.
    """
    step = _ratio_data(upper, lower, x)
    one = 1 << bits
    term = one
    total = one
    biggest = one
    n0 = _turning_index(upper, lower)
    limit = Fraction(abs(x)) if len(upper) == len(lower) + 1 else Fraction(0)
    n = 0
    while True:
        num, den = step(n)
        n += 1
        if num == 0:
            return total, 0, Fraction(0), n, biggest
        term = term * num // den
        total += term
        biggest = max(biggest, abs(term))
        if n > n0:
            nn, dd = step(n)
            rho = max(Fraction(abs(nn), abs(dd)), limit)
            if rho < 1:
                tail = abs(term) * rho / (1 - rho)
                if tail * (1 << eps_bits) <= max(abs(total), 1):
                    return total, term, rho, n + 1, biggest
        if n > max_terms:
            raise ConvergenceError("direct summation exceeded the term budget")


def _direct_geometric(spec: HypSeriesSpec, ctx: PrecisionContext) -> SummationOutcome:
    mp = ctx.mp
    extra = 32
    while True:
        bits = ctx.working_bits + extra
        total, term, rho, terms, biggest = _sum_fixed(spec.upper, spec.lower, spec.argument, bits, bits - 8)
        # cancellation: refine until the sum carries full working precision
        lost = biggest.bit_length() - max(abs(total), 1).bit_length()
        if lost + 32 <= extra or extra > 8 * ctx.working_bits:
            break
        extra = lost + 40
    value = mp.ldexp(mp.mpf(total), -bits)
    tail = mp.ldexp(mp.mpf(abs(term)), -bits) * ctx.real(rho / (1 - rho) if rho < 1 else Fraction(0))
    return SummationOutcome(ctx.check_finite(value), terms, tail, "direct")


def _richardson_unit(spec: HypSeriesSpec, ctx: PrecisionContext) -> SummationOutcome:
    """Unit-argument partial sums at N, 2N, 4N, ... extrapolated in powers N^-(s+j)."""
    mp = ctx.mp
    w = ctx.extended(32)
    wmp = w.mp
    bits = w.working_bits + 16
    s = w.real(spec.margin)
    step = _ratio_data(spec.upper, spec.lower, spec.argument)
    n_start = 64 + 4 * _turning_index(spec.upper, spec.lower)
    levels = 10
    checkpoints = {n_start << k for k in range(levels)}
    term = total = 1 << bits
    partials = []
    n = 0
    while len(partials) < levels:
        num, den = step(n)
        n += 1
        term = term * num // den
        total += term
        if n in checkpoints:
            partials.append(wmp.ldexp(wmp.mpf(total), -bits))
    table = [partials[0]]
    estimates = []
    for k in range(1, levels):
        row = [partials[k]]
        for j in range(1, k + 1):
            f = wmp.mpf(2) ** (s + j - 1)
            row.append((f * row[j - 1] - table[j - 1]) / (f - 1))
        estimates.append(row[-1])
        table = row
    value = estimates[-1]
    err = abs(estimates[-1] - estimates[-2])
    return SummationOutcome(
        mp.mpf(value), n, mp.mpf(err), "direct", digits_cap=CAPPED_DIRECT_DIGITS
    )


# ---------------------------------------------------------------------------
# alternating acceleration


def cvz_depth(ctx: PrecisionContext) -> int:
    return math.ceil(1.31 * ctx.working_bits * math.log10(2)) + 4


def cvz_sum(terms: Sequence, ctx: PrecisionContext):
    """Sum of (-1)^k terms[k] by the Chebyshev-weight scheme; depth = len(terms).

    Returns (value, error estimate).
    """
    mp = ctx.mp
    n = len(terms)
    d = (3 + mp.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b = -mp.one
    c = -d
    s = mp.zero
    for k in range(n):
        c = b - c
        s += c * terms[k]
        b = (k + n) * (k - n) * b / ((k + mp.mpf(0.5)) * (k + 1))
    value = s / d
    err = 2 * abs(terms[0]) / d if n else mp.zero
    return value, err


def _fixed_terms(upper, lower, x: Fraction, count: int, ctx: PrecisionContext) -> list:
    """First ``count`` terms as reals (fixed point with generous guard bits)."""
    mp = ctx.mp
    bits = ctx.working_bits + 40
    step = _ratio_data(upper, lower, x)
    term = 1 << bits
    out = []
    for n in range(count):
        out.append(mp.ldexp(mp.mpf(term), -bits))
        num, den = step(n)
        term = term * num // den
    return out


def _alternating(spec: HypSeriesSpec, ctx: PrecisionContext, depth: Optional[int] = None) -> SummationOutcome:
    if spec.argument != -1:
        raise DomainError("alternating acceleration needs argument -1")
    n = depth or cvz_depth(ctx)
    w = ctx.extended(16)
    terms = _fixed_terms(spec.upper, spec.lower, Fraction(1), n, w)
    value, err = cvz_sum(terms, w)
    return SummationOutcome(ctx.mp.mpf(value), n, ctx.mp.mpf(err), "alternating_acceleration")


# ---------------------------------------------------------------------------
# 2F1 evaluator: series for |z| <= 1/2, Pfaff for z < 0, 1-z transformation
# (including the logarithmic integer cases) for 1/2 < z < 1.


class _FixedPowerSeries:
    """sum c_n w^n with c_n exact rationals (or reals) rounded to fixed point once."""

    def __init__(self, coeff_fn, bits: int, n0: int):
        self.coeff_fn = coeff_fn
        self.bits = bits
        self.n0 = n0
        self.coeffs: list[int] = []

    def _coeff(self, n: int) -> int:
        while len(self.coeffs) <= n:
            self.coeffs.append(self.coeff_fn(len(self.coeffs)))
        return self.coeffs[n]

    def __call__(self, w_fixed: int) -> int:
        bits = self.bits
        one = 1 << bits
        total = 0
        power = one
        zeros = 0
        n = 0
        while True:
            c = self._coeff(n)
            t = (c * power) >> bits
            total += t
            if t == 0 and n > self.n0:
                zeros += 1
                if zeros >= 3 or power == 0:
                    return total
            else:
                zeros = 0
            power = (power * w_fixed) >> bits
            n += 1


def _rational_coeffs(ups: Sequence[Fraction], lows: Sequence[Fraction], bits: int, limit: Optional[int] = None):
    """n -> round(prod (u)_n / prod (l)_n * 2**bits) with n! counted in ``lows`` via 1."""
    state = {"n": 0, "value": Fraction(1)}

    def coeff(n: int) -> int:
        if limit is not None and n > limit:
            return 0
        while state["n"] < n:
            k = state["n"]
            r = Fraction(1)
            for u in ups:
                r *= u + k
            for l in lows:
                r /= l + k
            state["value"] *= r
            state["n"] += 1
        v = state["value"]
        return (v.numerator << bits) // v.denominator

    return coeff


class Hyp2F1:
    """Real 2F1[a, b; c; z] for rational parameters and real z < 1.

    Call with ``(z, zc)`` where ``zc = 1 - z`` is supplied accurately when z is
    close to 1 (quadrature nodes).  Coefficient tables are built once per
    instance, so repeated calls are cheap.
    """

    def __init__(self, a, b, c, ctx: PrecisionContext):
        self.a, self.b, self.c = _frac(a), _frac(b), _frac(c)
        if _is_npi(self.c):
            raise DomainError(f"2F1 lower parameter {self.c} is a nonpositive integer")
        self.ctx = ctx
        self.bits = ctx.working_bits + 32
        a, b, c = self.a, self.b, self.c
        self.poly_degree = None
        for u in (a, b):
            if _is_npi(u):
                d = -int(u)
                self.poly_degree = d if self.poly_degree is None else min(self.poly_degree, d)
        n0 = _turning_index((a, b), (c,)) + 4
        self._series = _FixedPowerSeries(
            _rational_coeffs((a, b), (c, Fraction(1)), self.bits, self.poly_degree), self.bits, n0
        )
        self._pfaff = None
        self._euler = None
        self._transform = None
        self._f1 = None

    # -- helpers -------------------------------------------------------------
    def _fixed(self, w) -> int:
        mp = self.ctx.mp
        return int(mp.floor(mp.ldexp(w, self.bits)))

    def _from_fixed(self, v: int):
        mp = self.ctx.mp
        return mp.ldexp(mp.mpf(v), -self.bits)

    def series(self, z):
        """Plain power series; caller guarantees |z| well inside the disc."""
        return self._from_fixed(self._series(self._fixed(z)))

    def __call__(self, z, zc=None):
        mp = self.ctx.mp
        z = self.ctx.real(z) if isinstance(z, (int, Fraction)) else mp.mpf(z)
        if zc is None:
            zc = 1 - z
        elif isinstance(zc, (int, Fraction)):
            zc = self.ctx.real(zc)
        if zc <= 0:
            raise DomainError("2F1 evaluator needs z < 1")
        if self.poly_degree is not None or abs(z) <= 0.5:
            if self.poly_degree is not None and abs(z) > 0.5:
                return self._polynomial(z)
            return self.series(z)
        if z < 0:
            if self._pfaff is None:
                self._pfaff = Hyp2F1(self.a, self.c - self.b, self.c, self.ctx)
            # z/(z-1) and its complement 1/(1-z)
            return zc ** (-self.ctx.real(self.a)) * self._pfaff(-z / zc, 1 / zc)
        return self._one_minus(z, zc)

    def deficit(self, z, zc=None):
        """F(1) - F(z) for c - a - b > 0, without cancellation as z -> 1."""
        a, b, c = self.a, self.b, self.c
        m = c - a - b
        if m <= 0:
            raise DomainError("deficit needs c - a - b > 0")
        ctx = self.ctx
        mp = ctx.mp
        z = ctx.real(z) if isinstance(z, (int, Fraction)) else mp.mpf(z)
        if zc is None:
            zc = 1 - z
        elif isinstance(zc, (int, Fraction)):
            zc = ctx.real(zc)
        if self._f1 is None:
            self._f1 = gamma_ratio((c, m), (c - a, c - b), ctx.extended(32))
        if z <= 0.5 or self.poly_degree is not None or m.denominator == 1:
            return ctx.mp.mpf(self._f1 - self(z, zc))
        if _is_npi(c - a) or _is_npi(c - b):
            # F(1) = 0 here: F = zc^m * polynomial
            return -self(z, zc)
        if self._transform is None:
            self._transform = _OneMinusZ(a, b, c, ctx, self.bits)
        return self._transform.deficit(zc)

    def _polynomial(self, z):
        # terminating series evaluated directly in working precision (+ guard)
        a, b, c = self.a, self.b, self.c
        w = self.ctx.extended(4 * self.poly_degree.bit_length() + 16)
        acc = w.mp.zero
        coeff = Fraction(1)
        zp = w.mp.one
        zz = w.mp.mpf(z)
        for n in range(self.poly_degree + 1):
            acc += w.real(coeff) * zp
            coeff *= (a + n) * (b + n) / ((c + n) * (n + 1))
            zp *= zz
        return self.ctx.mp.mpf(acc)

    def _one_minus(self, z, zc):
        a, b, c = self.a, self.b, self.c
        ctx = self.ctx
        mp = ctx.mp
        # Euler transformation turns c-a or c-b in {0,-1,...} into a polynomial
        if _is_npi(c - a) or _is_npi(c - b):
            if self._euler is None:
                self._euler = Hyp2F1(c - a, c - b, c, ctx)
            return zc ** ctx.real(c - a - b) * self._euler(z, zc)
        if self._transform is None:
            self._transform = _OneMinusZ(a, b, c, ctx, self.bits)
        return self._transform(zc)


class _OneMinusZ:
    """Connection formulas around z = 1 with w = 1 - z < 1/2."""

    def __init__(self, a: Fraction, b: Fraction, c: Fraction, ctx: PrecisionContext, bits: int):
        self.ctx = ctx
        self.bits = bits
        w = ctx.extended(32)
        m = c - a - b
        self.m = m
        n0 = _turning_index((a, b, c), ()) + 4
        if m.denominator != 1:
            self.log_case = False
            self.p1 = gamma_ratio((c, m), (c - a, c - b), w)
            self.p2 = gamma_ratio((c, -m), (a, b), w)
            self.e2 = w.real(m)
            self.s1 = _FixedPowerSeries(_rational_coeffs((a, b), (1 - m, Fraction(1)), bits), bits, n0)
            self.s2 = _FixedPowerSeries(
                _rational_coeffs((c - a, c - b), (1 + m, Fraction(1)), bits), bits, n0
            )
            return
        self.log_case = True
        k = abs(int(m))
        self.k = k
        shift = max(int(m), 0)
        alpha, beta = a + shift, b + shift
        if m >= 0:
            self.e1 = 0
            self.p1 = gamma_ratio((Fraction(k), c), (c - b, c - a), w) if k else w.mp.zero
            poly = (a, b)
            self.e2 = k
            self.p2 = -((-1) ** k) * gamma_ratio((c,), (a, b), w)
        else:
            self.e1 = -k
            self.p1 = gamma_ratio((Fraction(k), c), (a, b), w)
            poly = (a - k, b - k)
            self.e2 = 0
            self.p2 = -((-1) ** k) * gamma_ratio((c,), (a - k, b - k), w)
        self.poly = [Fraction(1)]
        for n in range(1, k):
            prev = self.poly[-1]
            self.poly.append(prev * (poly[0] + n - 1) * (poly[1] + n - 1) / (n * (1 - k + n - 1)))
        # c_n = (alpha)_n (beta)_n / (n! (n+k)!) ; d_n = psi(alpha+n)+psi(beta+n)-psi(n+1)-psi(n+k+1)
        self.alpha, self.beta = alpha, beta
        self._c_exact = _rational_coeffs((alpha, beta), (Fraction(1), Fraction(k + 1)), bits)
        self.sc = _FixedPowerSeries(lambda n: self._c_exact(n) // math.factorial(k), bits, n0)
        self._w = w
        self._psi_state = None
        self.sd = _FixedPowerSeries(self._cd_coeff, bits, n0)

    def _psi_sum(self, n: int):
        # d_n as a real, via upward recurrences from psi(alpha), psi(beta)
        w = self._w
        st = self._psi_state
        if st is None:
            zero_ok = not (is_nonpositive_integer(self.alpha) or is_nonpositive_integer(self.beta))
            if not zero_ok:
                raise DomainError("1-z transformation hit a digamma pole")
            euler = const_euler(w)
            st = {
                "n": 0,
                "pa": digamma(self.alpha, w),
                "pb": digamma(self.beta, w),
                "h": w.real(harmonic("H", self.k)) - euler,  # psi(k+1)
                "p1": -euler,  # psi(1)
            }
            self._psi_state = st
            self._d_cache = []
        while len(self._d_cache) <= n:
            i = st["n"]
            self._d_cache.append(st["pa"] + st["pb"] - st["p1"] - st["h"])
            st["pa"] += 1 / w.real(self.alpha + i)
            st["pb"] += 1 / w.real(self.beta + i)
            st["p1"] += w.mp.one / (i + 1)
            st["h"] += w.mp.one / (i + self.k + 1)
            st["n"] = i + 1
        return self._d_cache[n]

    def _cd_coeff(self, n: int) -> int:
        w = self._w
        mp = w.mp
        c = mp.ldexp(mp.mpf(self.sc._coeff(n)), -self.bits)
        return int(mp.floor(mp.ldexp(c * self._psi_sum(n), self.bits)))

    def deficit(self, zc):
        """-(F - p1) in the non-logarithmic case: p1 is F(1) when c - a - b > 0."""
        mp = self.ctx.mp
        bits = self.bits
        wf = int(mp.floor(mp.ldexp(zc, bits)))
        first = self.p1 * mp.ldexp(mp.mpf(self.s1(wf) - (1 << bits)), -bits)
        second = self.p2 * zc**self.e2 * mp.ldexp(mp.mpf(self.s2(wf)), -bits)
        return -(first + second)

    def __call__(self, zc):
        ctx = self.ctx
        mp = ctx.mp
        bits = self.bits
        wf = int(mp.floor(mp.ldexp(zc, bits)))
        fx = lambda v: mp.ldexp(mp.mpf(v), -bits)  # noqa: E731
        if not self.log_case:
            first = self.p1 * fx(self.s1(wf)) if self.p1 else mp.zero
            second = self.p2 * zc**self.e2 * fx(self.s2(wf)) if self.p2 else mp.zero
            return first + second
        total = mp.zero
        if self.k and self.p1:
            acc = mp.zero
            zp = mp.one
            for coef in self.poly:
                acc += ctx.real(coef) * zp
                zp *= zc
            total += self.p1 * zc**self.e1 * acc
        if self.p2:
            log_part = mp.log(zc) * fx(self.sc(wf)) + fx(self.sd(wf))
            total += self.p2 * zc**self.e2 * log_part
        return total


def hyp2f1(a, b, c, z, ctx: PrecisionContext):
    """2F1[a, b; c; z] for rational a, b, c and real z <= 1 (z = 1 by Gauss)."""
    zq = z if isinstance(z, Fraction) else None
    if zq is not None and zq == 1:
        return gauss_unit(a, b, c, ctx)
    return Hyp2F1(a, b, c, ctx)(z)


# ---------------------------------------------------------------------------
# Euler-integral quadrature for 2F1 and 3F2


def _euler_pairs(upper, lower):
    pairs = []
    for i, cu in enumerate(upper):
        for j, e in enumerate(lower):
            if e > cu > 0:
                pairs.append((min(cu, e - cu), i, j))
    pairs.sort(key=lambda t: -t[0])
    return [(i, j) for _, i, j in pairs]


def _quadrature(spec: HypSeriesSpec, ctx: PrecisionContext) -> SummationOutcome:
    x = spec.argument
    if x > 1 or x < -1:
        raise DomainError("Euler-integral path needs -1 <= x <= 1")
    p, q = spec.p, spec.q
    mp = ctx.mp
    if (p, q) == (0, 0):
        return SummationOutcome(mp.exp(ctx.real(x)), 0, mp.zero, "euler_integral_quadrature")
    if (p, q) == (1, 0):
        val = mp.zero if x == 1 else ctx.real(1 - x) ** (-ctx.real(spec.upper[0]))
        return SummationOutcome(val, 0, mp.zero, "euler_integral_quadrature")
    if (p, q) == (2, 1):
        return _quadrature_2f1(spec, ctx)
    if (p, q) == (3, 2):
        pairs = _euler_pairs(spec.upper, spec.lower)
        if not pairs:
            raise DomainError(f"no Euler-integral parameter pair (lower > upper > 0) for {spec}")
        i, j = pairs[0]
        cu, e = spec.upper[i], spec.lower[j]
        rest_up = [u for k, u in enumerate(spec.upper) if k != i]
        d = [v for k, v in enumerate(spec.lower) if k != j][0]
        return _euler_integral(cu, e, rest_up, d, x, ctx)
    raise DomainError(f"Euler-integral path supports 2F1 and 3F2 shapes, not {p}F{q}")


def _euler_integral(cu: Fraction, e: Fraction, inner_up, d: Fraction, x: Fraction, ctx: PrecisionContext):
    """Gamma(e)/(Gamma(cu)Gamma(e-cu)) * int t^(cu-1)(1-t)^(e-cu-1) 2F1(inner; d; x t) dt."""
    w = ctx.extended(16)
    mp = w.mp
    inner = Hyp2F1(inner_up[0], inner_up[1], d, w)
    e1, e2 = w.real(cu - 1), w.real(e - cu - 1)
    xr = w.real(x)
    one_minus_x = w.real(1 - x)

    def f(t, tc, wc):
        z, zc = xr * t, one_minus_x + xr * tc
        return mp.exp(e1 * mp.log(t) + e2 * mp.log(tc)) * inner(z, zc)

    res = integrate(f, w)
    pref = gamma_quotient(GammaQuotientSpec((e,), (cu, e - cu)), w)
    value = pref * res.value
    return SummationOutcome(
        ctx.mp.mpf(value), res.nodes, ctx.mp.mpf(res.last_level_delta * abs(pref)), "euler_integral_quadrature"
    )


def _quadrature_2f1(spec: HypSeriesSpec, ctx: PrecisionContext) -> SummationOutcome:
    (a1, a2), (c,) = spec.upper, spec.lower
    x = spec.argument
    for au, b in ((a1, a2), (a2, a1)):
        if c > au > 0:
            w = ctx.extended(16)
            mp = w.mp
            e1, e2, bb = w.real(au - 1), w.real(c - au - 1), w.real(b)
            xr, omx = w.real(x), w.real(1 - x)

            def f(t, tc, wc, e1=e1, e2=e2, bb=bb):
                return mp.exp(e1 * mp.log(t) + e2 * mp.log(tc) - bb * mp.log(omx + xr * tc))

            res = integrate(f, w)
            pref = gamma_quotient(GammaQuotientSpec((c,), (au, c - au)), w)
            return SummationOutcome(
                ctx.mp.mpf(pref * res.value), res.nodes, ctx.mp.mpf(res.last_level_delta * abs(pref)),
                "euler_integral_quadrature",
            )
    if x != 1:
        raise DomainError(f"no Euler-integral parameter pair for {spec}")
    # shift the index by m: the tail is t_m * 3F2[a1+m, a2+m, 1; c+m, 1+m; 1],
    # whose (1, 1+m) pair always admits the Euler integral
    m = 1 + max(0, -math.floor(min(a1, a2, c)))
    head = Fraction(0)
    term = Fraction(1)
    for n in range(m):
        head += term
        term *= (a1 + n) * (a2 + n) / ((c + n) * (n + 1))
    tail = _euler_integral(Fraction(1), Fraction(1 + m), (a1 + m, a2 + m), c + m, Fraction(1), ctx)
    value = ctx.real(head) + ctx.real(term) * tail.value
    return SummationOutcome(value, tail.terms_used + m, tail.tail_bound_estimate * abs(ctx.real(term)),
                            "euler_integral_quadrature")


# ---------------------------------------------------------------------------


def _normalise_method(method: str) -> str:
    method = METHOD_ALIASES.get(method, method)
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")
    return method


def pfq_eval(spec: HypSeriesSpec, ctx: PrecisionContext, method: str = "auto") -> SummationOutcome:
    """Evaluate a convergent or terminating pFq.

    ``auto`` picks exact summation for terminating series, fixed-point direct
    summation for |x| < 1, the Euler integral at x = 1 when the shape allows
    (capped Richardson-extrapolated summation otherwise) and acceleration at x = -1.
    """
    method = _normalise_method(method)
    spec = spec.reduced()
    cls = spec.convergence_class()
    mp = ctx.mp
    if cls == "terminating" and method in ("auto", "direct"):
        m = spec.terminating_index
        value = _exact_terminating(spec.upper, spec.lower, spec.argument, m)
        return SummationOutcome(ctx.real(value), m + 1, mp.zero, "direct")
    if method == "auto":
        if cls == "geometric":
            method = "direct"
        elif cls == "alternating_unit":
            method = "alternating_acceleration"
        else:
            try:
                return _quadrature(spec, ctx)
            except DomainError:
                method = "direct"
    if method == "direct":
        if cls == "geometric":
            return _direct_geometric(spec, ctx)
        if cls == "unit":
            return _richardson_unit(spec, ctx)
        return _alternating(spec, ctx)
    if method == "alternating_acceleration":
        return _alternating(spec, ctx)
    return _quadrature(spec, ctx)


def pfq(upper: Iterable, lower: Iterable, x, ctx: PrecisionContext, method: str = "auto"):
    """Convenience wrapper returning only the value."""
    return pfq_eval(HypSeriesSpec.of(upper, lower, x), ctx, method).value


# ---------------------------------------------------------------------------
# closed-form summation theorems


def _check_no_pole(args: Iterable[Fraction], what: str) -> None:
    for v in args:
        if _is_npi(v):
            raise DomainError(f"{what}: gamma pole at argument {v}")


def gauss_unit(a, b, c, ctx: PrecisionContext):
    """2F1[a, b; c; 1] = Gamma[c, c-a-b; c-a, c-b]."""
    a, b, c = _frac(a), _frac(b), _frac(c)
    if c - a - b <= 0:
        raise DomainError("Gauss summation needs c - a - b > 0")
    _check_no_pole((c, c - a, c - b), "Gauss summation")
    return gamma_quotient(GammaQuotientSpec((c, c - a - b), (c - a, c - b)), ctx)


def bailey_half(a, c, ctx: PrecisionContext):
    """2F1[a, 1-a; c; 1/2] = Gamma[c/2, (c+1)/2; (a+c)/2, (1-a+c)/2]."""
    a, c = _frac(a), _frac(c)
    _check_no_pole((c,), "Bailey's theorem (lower parameter)")
    _check_no_pole(((a + c) / 2, (1 - a + c) / 2), "Bailey's theorem")
    return gamma_quotient(GammaQuotientSpec((c / 2, (c + 1) / 2), ((a + c) / 2, (1 - a + c) / 2)), ctx)


def dixon_wellpoised(a, b, c, ctx: PrecisionContext):
    """3F2[a, b, c; 1+a-b, 1+a-c; 1] by Dixon's theorem."""
    a, b, c = _frac(a), _frac(b), _frac(c)
    _check_no_pole((1 + a - b, 1 + a - c), "Dixon (lower parameter)")
    if 1 + a / 2 - b - c <= 0:
        raise DomainError("Dixon's series diverges: need 1 + a/2 - b - c > 0")
    _check_no_pole((1 + a / 2,), "Dixon")
    return gamma_ratio(
        (1 + a / 2, 1 + a / 2 - b - c, 1 + a - b, 1 + a - c),
        (1 + a, 1 + a - b - c, 1 + a / 2 - b, 1 + a / 2 - c),
        ctx,
    )


def chu_almost_poised(a, b, c, ctx: PrecisionContext):
    """3F2[a, b, c; 2+a-b, 2+a-c; 1], the almost-poised analogue of Dixon's theorem.

    Boundary parameter sets where any gamma factor of the closed form hits a
    pole are rejected rather than evaluated as limits.
    """
    a, b, c = _frac(a), _frac(b), _frac(c)
    if b == 1 or c == 1:
        raise DomainError("almost-poised formula needs b != 1 and c != 1")
    _check_no_pole((2 + a - b, 2 + a - c), "almost-poised (lower parameter)")
    if 4 + a - 2 * b - 2 * c <= 0:
        raise DomainError("almost-poised series diverges: need 4 + a - 2b - 2c > 0")
    first = ((1 + a) / 2, (2 + a) / 2 - b, (2 + a) / 2 - c, (5 + a) / 2 - b - c)
    second = (a / 2, (3 + a) / 2 - b, (3 + a) / 2 - c, (4 + a) / 2 - b - c)
    outer_num = (a - b + 2, a - c + 2)
    outer_den = (a, a - 2 * b + 2, a - 2 * c + 2, a - b - c + 2)
    _check_no_pole(first + second + outer_num + outer_den, "almost-poised formula")
    w = ctx.extended(24)  # the bracket may cancel
    mp = w.mp
    bracket = gamma_quotient(GammaQuotientSpec(first), w) - gamma_quotient(GammaQuotientSpec(second), w)
    outer = gamma_quotient(GammaQuotientSpec(outer_num, outer_den), w)
    pref = mp.mpf(2) ** w.real(1 + 2 * a - 2 * b - 2 * c)
    pref /= const_pi(w) * w.real((b - 1) * (1 - c))
    return ctx.mp.mpf(pref * outer * bracket)


def watson_3f2(a, b, c, ctx: PrecisionContext):
    """3F2[a, b, c; (a+b+1)/2, 2c; 1] by Watson's theorem."""
    a, b, c = _frac(a), _frac(b), _frac(c)
    _check_no_pole(((a + b + 1) / 2, 2 * c), "Watson (lower parameter)")
    if c + (1 - a - b) / 2 <= 0:
        raise DomainError("Watson's series diverges: need c + (1-a-b)/2 > 0")
    half = Fraction(1, 2)
    return gamma_ratio(
        (half, c + half, (a + b + 1) / 2, c - (a + b - 1) / 2),
        ((a + 1) / 2, (b + 1) / 2, c - (a - 1) / 2, c - (b - 1) / 2),
        ctx,
    )


def luke_reduce_3f2(a, b, c, z, ctx: PrecisionContext):
    """3F2[a, b, 1; c, 2; z] through 2F1[a-1, b-1; c-1; z] (z != 0, -1 <= z <= 1)."""
    a, b, c, z = _frac(a), _frac(b), _frac(c), _frac(z)
    if a == 1 or b == 1:
        raise DomainError("reduction needs a != 1 and b != 1 (use luke_digamma at z = 1)")
    if c == 1 or _is_npi(c) or _is_npi(c - 1):
        raise DomainError("reduction needs c - 1 off the nonpositive integers")
    if z == 0:
        raise DomainError("reduction is singular at z = 0 (the series equals 1 there)")
    if not -1 <= z <= 1:
        raise DomainError("reduction needs |z| <= 1")
    pref = (c - 1) / ((a - 1) * (b - 1) * z)
    if z == 1:
        if c - a - b <= -1:
            raise DomainError("unit-argument reduction needs c - a - b > -1")
        w = ctx.extended(24)
        g = gamma_ratio((c - 1, c - a - b + 1), (c - a, c - b), w)
        return ctx.mp.mpf(w.real(pref) * (g - 1))
    # F - 1 loses about log2(1/|z|) bits
    w = ctx.extended(24 + z.denominator.bit_length())
    f = Hyp2F1(a - 1, b - 1, c - 1, w)(w.real(z), w.real(1 - z))
    return ctx.mp.mpf(w.real(pref) * (f - 1))


def luke_digamma(a, c, ctx: PrecisionContext):
    """3F2[a, 1, 1; c, 2; 1] = (c-1)/(a-1) (psi(c-1) - psi(c-a))."""
    a, c = _frac(a), _frac(c)
    if a == 1:
        raise DomainError("digamma reduction needs a != 1")
    if c - a <= 0:
        raise DomainError("digamma reduction needs c - a > 0")
    if _is_npi(c - 1) or _is_npi(c):
        raise DomainError("digamma pole at c - 1")
    w = ctx.extended(24)
    value = w.real((c - 1) / (a - 1)) * (digamma(c - 1, w) - digamma(c - a, w))
    return ctx.mp.mpf(value)
