"""Binomial-harmonic series: sum c^k binom(2k,k)^p w(k) with rate-aware methods.

The rate r = 4^p |c| decides the method:

* r < 1: exact rational terms, geometric tail bound (no cap);
* r = 1, c < 0: Cohen-Rodriguez Villegas-Zagier acceleration (30-digit cap);
* r = 1, c > 0: hypergeometric conversion plus Euler-integral quadrature when
  the weight has no harmonic factor, the odd-harmonic moment integral for
  O_{2k} weights (both 30 digits), otherwise a long fixed-point partial sum
  with an Euler-Maclaurin tail (10 digits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

from .hyper import HypSeriesSpec, Hyp2F1, SummationOutcome, cvz_depth, cvz_sum, pfq_eval
from .numcore import (
    HARMONIC_KINDS,
    ConvergenceError,
    DomainError,
    PrecisionContext,
    const_euler,
    const_ln2,
    const_pi,
    harmonic,
)
from .quad import integrate
from .special import bernoulli_even, digamma, gamma_quotient, GammaQuotientSpec

GEOMETRIC_CAP = 1000
QUADRATURE_CAP = 30
ALTERNATING_CAP = 30
POSITIVE_UNIT_CAP = 10
POSITIVE_UNIT_TERMS = 300_000
RATE_CLASSES = ("geometric", "alternating_unit", "positive_unit")

Linear = tuple  # (alpha, beta) meaning alpha*k + beta


def lin(alpha, beta) -> Linear:
    return (Fraction(alpha), Fraction(beta))


def central_binom(n: int) -> int:
    """binom(2n, n) by the recurrence b_{n+1} = b_n 2(2n+1)/(n+1)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    b = 1
    for i in range(n):
        b = b * 2 * (2 * i + 1) // (i + 1)
    return b


@dataclass(frozen=True)
class HarmonicPart:
    """coef * h(mult*k + offset) where h is a harmonic kind or the constant 1 ("none")."""

    kind: str
    coef: Fraction = Fraction(1)
    mult: int = 1
    offset: int = 0

    def __post_init__(self) -> None:
        if self.kind != "none" and self.kind not in HARMONIC_KINDS:
            raise DomainError(f"unknown harmonic kind {self.kind!r}")
        if self.mult < 0 or self.offset < 0:
            raise DomainError("harmonic argument must be nonnegative for k >= 0")
        object.__setattr__(self, "coef", Fraction(self.coef))


@dataclass(frozen=True)
class Weight:
    """scale * prod(numerator factors) / prod(denominator factors) * (sum of harmonic parts)."""

    numerator: tuple = ()
    denominator: tuple = ()
    scale: Fraction = Fraction(1)
    harmonic: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "numerator", tuple(lin(*f) for f in self.numerator))
        object.__setattr__(self, "denominator", tuple(lin(*f) for f in self.denominator))
        object.__setattr__(self, "scale", Fraction(self.scale))
        for alpha, beta in self.denominator:
            # alpha*k + beta = 0 for some integer k >= 0?
            if alpha == 0:
                bad = beta == 0
            else:
                root = -beta / alpha
                bad = root.denominator == 1 and root >= 0
            if bad:
                raise DomainError(f"weight denominator {alpha}k + {beta} vanishes for some k >= 0")

    @property
    def has_harmonic(self) -> bool:
        return any(h.kind != "none" for h in self.harmonic)

    @property
    def degree(self) -> int:
        """deg(numerator) - deg(denominator), counting only nonconstant factors."""
        return sum(1 for a, _ in self.numerator if a) - sum(1 for a, _ in self.denominator if a)

    def rational(self, k: int) -> Fraction:
        v = self.scale
        for a, b in self.numerator:
            v *= a * k + b
        for a, b in self.denominator:
            v /= a * k + b
        return v


def rational_weight(num: Sequence[Linear] = (), den: Sequence[Linear] = (), scale=1) -> Weight:
    return Weight(tuple(num), tuple(den), Fraction(scale))


@dataclass(frozen=True)
class SeriesSpec:
    """sum over k >= 0 of base_ratio^k binom(2k,k)^binom_power weight(k)."""

    base_ratio: Fraction
    binom_power: int
    weight: Weight = field(default_factory=Weight)

    def __post_init__(self) -> None:
        object.__setattr__(self, "base_ratio", Fraction(self.base_ratio))
        if self.binom_power not in (1, 2):
            raise DomainError("binom_power must be 1 or 2")
        if self.base_ratio == 0:
            raise DomainError("base_ratio must be nonzero")

    @property
    def rate(self) -> Fraction:
        return 4**self.binom_power * abs(self.base_ratio)

    @property
    def decay_order(self) -> Fraction:
        """Terms of unit-rate series behave like k^-decay_order (times logs)."""
        return Fraction(self.binom_power, 2) - self.weight.degree

    def rate_class(self) -> str:
        r = self.rate
        if r < 1:
            return "geometric"
        if r > 1:
            raise DomainError(f"divergent series: rate {r} > 1")
        if self.base_ratio < 0:
            if self.decay_order <= 0:
                raise DomainError("divergent alternating series: terms do not tend to zero")
            return "alternating_unit"
        if self.decay_order <= 1:
            raise DomainError("divergent positive series: terms decay too slowly")
        return "positive_unit"

    def terms(self) -> Iterator[Fraction]:
        """Exact terms t_0, t_1, ..."""
        return _exact_terms(self)

    def term(self, k: int) -> Fraction:
        base = self.base_ratio**k * central_binom(k) ** self.binom_power
        return base * self.weight.rational(k) * _harmonic_value(self.weight.harmonic, k)

    def hypergeometric(self) -> Optional[tuple[HypSeriesSpec, Fraction]]:
        """(pFq spec, t_0) when the series is t_0 * pFq(1 or x); None if not expressible."""
        if self.weight.has_harmonic:
            return None
        p = self.binom_power
        upper = [Fraction(1, 2)] * p
        lower = [Fraction(1)] * (p - 1)
        t0 = self.weight.scale
        for a, b in self.weight.numerator:
            if a == 0:
                t0 *= b
                continue
            u = b / a
            if u == 0 or (u.denominator == 1 and u < 0):
                return None
            upper.append(u + 1)
            lower.append(u)
            t0 *= b
        for a, b in self.weight.denominator:
            if a == 0:
                t0 /= b
                continue
            v = b / a
            upper.append(v)
            lower.append(v + 1)
            t0 /= b
        t0 *= _harmonic_value(self.weight.harmonic, 0)
        x = self.base_ratio * 4**p
        try:
            spec = HypSeriesSpec(tuple(upper), tuple(lower), x)
        except DomainError:
            return None
        return spec.reduced(), t0


def _harmonic_value(parts: Sequence[HarmonicPart], k: int) -> Fraction:
    if not parts:
        return Fraction(1)
    total = Fraction(0)
    for h in parts:
        total += h.coef * (1 if h.kind == "none" else harmonic(h.kind, h.mult * k + h.offset))
    return total


class _HarmonicTracker:
    """Exact running values of sum coef * h(mult*k + offset) as k increases."""

    def __init__(self, parts: Sequence[HarmonicPart]):
        self.parts = list(parts)
        self.position = [h.offset for h in self.parts]
        self.values = [Fraction(0) if h.kind == "none" else harmonic(h.kind, h.offset) for h in self.parts]

    def value(self) -> Fraction:
        if not self.parts:
            return Fraction(1)
        return sum(
            (h.coef * (1 if h.kind == "none" else v) for h, v in zip(self.parts, self.values)), Fraction(0)
        )

    def advance(self) -> None:
        from .numcore import _harmonic_step

        for i, h in enumerate(self.parts):
            if h.kind == "none":
                continue
            v = self.values[i]
            m = self.position[i]
            for j in range(m + 1, m + h.mult + 1):
                v += _harmonic_step(h.kind, j)
            self.values[i] = v
            self.position[i] = m + h.mult


def _exact_terms(spec: SeriesSpec) -> Iterator[Fraction]:
    c, p, w = spec.base_ratio, spec.binom_power, spec.weight
    base = Fraction(1)
    tracker = _HarmonicTracker(w.harmonic)
    k = 0
    while True:
        yield base * w.rational(k) * tracker.value()
        ratio = Fraction(2 * (2 * k + 1), k + 1) ** p * c
        base *= ratio
        tracker.advance()
        k += 1


# ---------------------------------------------------------------------------
# geometric class


def _geometric(spec: SeriesSpec, ctx: PrecisionContext, stride: int = 1, offset: int = 0) -> SummationOutcome:
    """Exact terms rounded to fixed point; stop on the |t_N| r/(1-r) tail estimate."""
    mp = ctx.mp
    bits = ctx.working_bits + 32
    r = spec.rate**stride
    factor = r / (1 - r)
    total = 0
    n = 0
    last = Fraction(0)
    quiet = 0
    for k, t in enumerate(spec.terms()):
        if k < offset or (k - offset) % stride:
            continue
        n += 1
        total += (t.numerator << bits) // t.denominator
        last = t
        tail = abs(t) * factor
        # a harmonic factor can make the true ratio exceed r slightly: demand
        # the estimate be tiny on several consecutive terms
        if t and (tail.numerator << (bits + ctx.working_bits + 8)) <= max(abs(total), 1 << bits) * tail.denominator:
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        if n > 40 * bits:
            raise ConvergenceError("geometric series failed to converge")
    value = mp.ldexp(mp.mpf(total), -bits)
    tail_est = ctx.real(abs(last) * factor)
    return SummationOutcome(value, n, tail_est, "direct")


# ---------------------------------------------------------------------------
# alternating unit class


def _alternating(spec: SeriesSpec, ctx: PrecisionContext, depth: Optional[int] = None) -> SummationOutcome:
    n = depth or cvz_depth(ctx)
    w = ctx.extended(16)
    # t_k = (-1)^k a_k  ->  a_k = (-1)^k t_k
    terms = [w.real(t if k % 2 == 0 else -t) for k, t in zip(range(n), spec.terms())]
    value, err = cvz_sum(terms, w)
    return SummationOutcome(ctx.mp.mpf(value), n, ctx.mp.mpf(err), "alternating_acceleration", ALTERNATING_CAP)


# ---------------------------------------------------------------------------
# positive unit class: odd-harmonic moment integral


def _odd_harmonic_form(spec: SeriesSpec) -> Optional[tuple[Fraction, Fraction, Fraction]]:
    """(t0, v, coef) when the sum is coef * sum (1/4)^n binom(2n,n) O_{2n} t0 (v)_n/(v+1)_n."""
    w = spec.weight
    if spec.binom_power != 1 or spec.base_ratio != Fraction(1, 4):
        return None
    if w.numerator or len(w.denominator) != 1 or len(w.harmonic) != 1:
        return None
    h = w.harmonic[0]
    if (h.kind, h.mult, h.offset) != ("O", 2, 0):
        return None
    a, b = w.denominator[0]
    if a == 0:
        return None
    return w.scale / b, b / a, h.coef


def _odd_harmonic(spec: SeriesSpec, ctx: PrecisionContext) -> SummationOutcome:
    t0, v, coef = _odd_harmonic_form(spec)
    w = ctx.extended(32)
    mp = w.mp
    half = Fraction(1, 2)
    W = Hyp2F1(half, v, v + 1, w)

    def f(x, xc, _c):
        x2 = x * x
        uc = xc * (1 + x) * (1 + x2)
        return W.deficit(x2 * x2, uc) / (xc * (1 + x))

    res = integrate(f, w)
    scale = w.real(t0 * coef)
    return SummationOutcome(
        ctx.mp.mpf(scale * res.value), res.nodes, ctx.mp.mpf(abs(scale) * res.last_level_delta),
        "euler_integral_quadrature", QUADRATURE_CAP,
    )


# ---------------------------------------------------------------------------
# positive unit class: partial sum + Euler-Maclaurin tail


def _ratio_asymptotic(x, a: Fraction, b: Fraction, ctx: PrecisionContext):
    """Gamma(x+a)/Gamma(x+b) for large real x from the Bernoulli-polynomial expansion."""
    mp = ctx.mp
    logv = ctx.real(a - b) * mp.log(x)
    eps = ctx.eps
    inv = 1 / x
    power = inv
    n = 1
    while True:
        c = _bernoulli_poly(n + 1, a) - _bernoulli_poly(n + 1, b)
        term = ctx.real((-1) ** (n + 1) * c / (n * (n + 1))) * power
        logv += term
        if c and abs(term) < eps:
            break
        n += 1
        power *= inv
        if n > 200:
            raise ConvergenceError("asymptotic gamma ratio needs a larger argument")
    return mp.exp(logv)


@lru_cache(maxsize=512)
def _bernoulli_poly(n: int, a: Fraction) -> Fraction:
    evens = bernoulli_even(n // 2 + 1)
    total = Fraction(0)
    for k in range(n + 1):
        if k == 0:
            bk = Fraction(1)
        elif k == 1:
            bk = Fraction(-1, 2)
        elif k % 2:
            continue
        else:
            bk = evens[k // 2 - 1]
        total += math.comb(n, k) * bk * a ** (n - k)
    return total


def _harmonic_real(kind: str, y, ctx: PrecisionContext):
    """Continuous extension of the harmonic kinds for real y >= 0."""
    mp = ctx.mp
    gamma = const_euler(ctx)

    def h(t):
        return digamma(t + 1, ctx) + gamma

    if kind == "H":
        return h(y)
    if kind == "O":
        return h(2 * y) - h(y) / 2
    raise DomainError(f"no continuous extension for harmonic kind {kind!r}")


def _continuous_term(spec: SeriesSpec, x, ctx: PrecisionContext):
    """|t(x)| for real x, for a unit-rate spec."""
    mp = ctx.mp
    p = spec.binom_power
    sqrt_pi = mp.sqrt(const_pi(ctx))
    value = (_ratio_asymptotic(x, Fraction(1, 2), Fraction(1), ctx) / sqrt_pi) ** p
    w = spec.weight
    r = ctx.real(w.scale)
    for a, b in w.numerator:
        r *= ctx.real(a) * x + ctx.real(b)
    for a, b in w.denominator:
        r /= ctx.real(a) * x + ctx.real(b)
    value *= r
    if w.harmonic:
        hv = mp.zero
        for part in w.harmonic:
            if part.kind == "none":
                hv += ctx.real(part.coef)
                continue
            arg = part.mult * x + part.offset
            if part.kind == "H_alt":
                if part.mult % 2:
                    raise DomainError("alternating harmonic numbers extend only at even multiples")
                # H'_n = H_n - H_{floor(n/2)} for the parity fixed by the offset
                half = (arg - (part.offset % 2)) / 2
                hv += ctx.real(part.coef) * (_harmonic_real("H", arg, ctx) - _harmonic_real("H", half, ctx))
            else:
                hv += ctx.real(part.coef) * _harmonic_real(part.kind, arg, ctx)
        value *= hv
    return abs(value)


@dataclass(frozen=True)
class EulerMaclaurinResult:
    value: object
    lower: object
    upper: object
    partial: object
    terms: int


def _fixed_partial(spec: SeriesSpec, count: int, bits: int) -> tuple[int, int, int]:
    """Fixed-point partial sums over k < count: (all, even k, odd k)."""
    one = 1 << bits
    p = spec.binom_power
    base = one  # (binom(2k,k)/4^k)^p
    sign = -1 if spec.base_ratio < 0 else 1
    w = spec.weight
    num_int = []
    for a, b in w.numerator:
        d = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        num_int.append((int(a * d), int(b * d), d))
    den_int = []
    for a, b in w.denominator:
        d = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        den_int.append((int(a * d), int(b * d), d))
    scale_n, scale_d = w.scale.numerator, w.scale.denominator
    parts = list(w.harmonic)
    hvals = []
    for h in parts:
        if h.kind == "none":
            hvals.append(one)
        else:
            v = harmonic(h.kind, h.offset)
            hvals.append((v.numerator << bits) // v.denominator)
    from .numcore import _harmonic_step

    total = even = odd = 0
    for k in range(count):
        num, den = scale_n, scale_d
        for a, b, d in num_int:
            num *= a * k + b
            den *= d
        for a, b, d in den_int:
            den *= a * k + b
            num *= d
        t = base * num // den
        if parts:
            hsum = 0
            for h, hv in zip(parts, hvals):
                hsum += (h.coef.numerator * hv) // h.coef.denominator
            t = (t * hsum) >> bits
        if sign < 0 and k % 2:
            t = -t
        total += t
        if k % 2:
            odd += t
        else:
            even += t
        # advance
        for _ in range(p):
            base = base * (2 * k + 1) // (2 * k + 2)
        for i, h in enumerate(parts):
            if h.kind == "none":
                continue
            m = h.mult * k + h.offset
            for j in range(m + 1, m + h.mult + 1):
                s = _harmonic_step(h.kind, j)
                hvals[i] += (s.numerator << bits) // s.denominator
    return total, even, odd


def _em_tail(spec: SeriesSpec, start: int, stride: int, offset: int, ctx: PrecisionContext):
    """(integral, first term) for the tail sum over j >= start of |t(stride*j + offset)|."""
    mp = ctx.mp
    n = ctx.real(start)

    def g(y):
        return _continuous_term(spec, stride * y + offset, ctx)

    def f(t, tc, _c):
        y = n / t
        return g(y) * n / (t * t)

    res = integrate(f, ctx)
    return res.value, g(n)


def euler_maclaurin(spec: SeriesSpec, ctx: PrecisionContext, stride: int = 1, offset: int = 0,
                    terms: int = POSITIVE_UNIT_TERMS) -> EulerMaclaurinResult:
    """Partial sum of the selected terms plus the integral/half-term tail estimate.

    ``lower``/``upper`` are the bracketing bounds partial + integral and
    partial + integral + first omitted term (valid for eventually monotone terms).
    """
    cls = spec.rate_class()
    if cls == "geometric":
        raise DomainError("Euler-Maclaurin path is for unit-rate series")
    if cls == "alternating_unit" and stride % 2:
        raise DomainError("alternating series must be split by parity before the tail estimate")
    bits = ctx.working_bits + 24
    count = terms * stride + offset
    total, even, odd = _fixed_partial(spec, count, bits)
    partial_int = {1: total, 2: even if offset == 0 else odd}[stride] if stride in (1, 2) else None
    if partial_int is None:
        raise DomainError("stride must be 1 or 2")
    mp = ctx.mp
    partial = mp.ldexp(mp.mpf(partial_int), -bits)
    sign = 1
    if spec.base_ratio < 0 and offset % 2:
        sign = -1
    integral, first = _em_tail(spec, terms, stride, offset, ctx)
    integral *= sign
    first *= sign
    lower = partial + integral
    upper = lower + first
    value = lower + first / 2
    return EulerMaclaurinResult(value, min(lower, upper), max(lower, upper), partial, terms)


def positive_unit_bracket(spec: SeriesSpec, ctx: PrecisionContext) -> EulerMaclaurinResult:
    return euler_maclaurin(spec, ctx)


# ---------------------------------------------------------------------------


def sum_series(spec: SeriesSpec, ctx: PrecisionContext, force_cap: bool = False) -> SummationOutcome:
    """Sum the series with the method its rate class calls for.

    Requests beyond a method's digit cap raise unless ``force_cap`` is set, in
    which case the value is computed at the requested precision and the cap is
    recorded in the outcome.
    """
    cls = spec.rate_class()
    if cls == "geometric":
        return _geometric(spec, ctx)
    digits = ctx.requested_decimal_digits
    if cls == "alternating_unit":
        _check_cap(digits, ALTERNATING_CAP, force_cap)
        return _alternating(spec, ctx)
    hyp = spec.hypergeometric()
    if hyp is not None:
        hspec, t0 = hyp
        out = pfq_eval(hspec, ctx, "auto")
        cap = out.digits_cap or QUADRATURE_CAP
        _check_cap(digits, cap, force_cap)
        scale = ctx.real(t0)
        return SummationOutcome(out.value * scale, out.terms_used, out.tail_bound_estimate * abs(scale),
                                out.method, cap)
    if _odd_harmonic_form(spec) is not None:
        _check_cap(digits, QUADRATURE_CAP, force_cap)
        return _odd_harmonic(spec, ctx)
    _check_cap(digits, POSITIVE_UNIT_CAP, force_cap)
    em = euler_maclaurin(spec, ctx)
    return SummationOutcome(em.value, em.terms, abs(em.upper - em.lower) / 2, "direct", POSITIVE_UNIT_CAP)


def series_cap(spec: SeriesSpec) -> Optional[int]:
    """Digit cap the summation method for ``spec`` can certify (None: uncapped)."""
    cls = spec.rate_class()
    if cls == "geometric":
        return None
    if cls == "alternating_unit":
        return ALTERNATING_CAP
    hyp = spec.hypergeometric()
    if hyp is not None:
        hspec = hyp[0]
        if hspec.convergence_class() == "terminating":
            return None
        if hspec.p == hspec.q + 1 and (hspec.p, hspec.q) in ((2, 1), (3, 2), (1, 0)):
            return QUADRATURE_CAP
        return 12
    if _odd_harmonic_form(spec) is not None:
        return QUADRATURE_CAP
    return POSITIVE_UNIT_CAP


def _check_cap(digits: int, cap: int, force: bool) -> None:
    if digits > cap and not force:
        raise DomainError(f"{digits} digits requested but this method certifies at most {cap}; pass force_cap")


# ---------------------------------------------------------------------------
# bisection


@dataclass(frozen=True)
class GammaRatioSeries:
    """sum over n >= 1 of Gamma(n/2 + alpha) / (n Gamma(n/2 + beta)), beta > alpha."""

    alpha: Fraction
    beta: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.beta <= self.alpha:
            raise DomainError("series diverges unless beta > alpha")
        if self.alpha <= Fraction(-1, 2):
            raise DomainError("alpha must exceed -1/2")

    def full(self, ctx: PrecisionContext):
        """From the beta integral of the gamma ratio and sum t^(n/2)/n = -log(1 - sqrt t)."""
        a, b = self.alpha, self.beta
        w = ctx.extended(16)
        mp = w.mp
        e1, e2 = w.real(a - 1), w.real(b - a - 1)

        def f(t, tc, _c):
            s = mp.sqrt(t)
            return -mp.exp(e1 * mp.log(t) + e2 * mp.log(tc)) * mp.log(tc / (1 + s))

        res = integrate(f, w)
        pref = gamma_quotient(GammaQuotientSpec((), (b - a,)), w)
        return ctx.mp.mpf(pref * res.value)

    def even(self, ctx: PrecisionContext):
        a, b = self.alpha, self.beta
        h = HypSeriesSpec((1 + a, Fraction(1), Fraction(1)), (1 + b, Fraction(2)), 1)
        pref = gamma_quotient(GammaQuotientSpec((1 + a,), (1 + b,)), ctx) / 2
        return pref * pfq_eval(h, ctx).value

    def odd(self, ctx: PrecisionContext):
        a, b = self.alpha, self.beta
        half = Fraction(1, 2)
        h = HypSeriesSpec((half + a, half, Fraction(1)), (half + b, Fraction(3, 2)), 1)
        pref = gamma_quotient(GammaQuotientSpec((half + a,), (half + b,)), ctx)
        return pref * pfq_eval(h, ctx).value


@dataclass(frozen=True)
class BisectionResult:
    full: object
    even: object
    odd: object
    residual: object
    digits_cap: Optional[int]


def bisect(spec: Union[SeriesSpec, GammaRatioSeries], ctx: PrecisionContext) -> BisectionResult:
    """Full sum and the even- and odd-index parts, each summed on its own."""
    if isinstance(spec, GammaRatioSeries):
        full, even, odd = spec.full(ctx), spec.even(ctx), spec.odd(ctx)
        return BisectionResult(full, even, odd, abs(full - even - odd), QUADRATURE_CAP)
    cls = spec.rate_class()
    if cls == "geometric":
        full = _geometric(spec, ctx).value
        even = _geometric(spec, ctx, 2, 0).value
        odd = _geometric(spec, ctx, 2, 1).value
        return BisectionResult(full, even, odd, abs(full - even - odd), None)
    if cls == "alternating_unit" and spec.decay_order <= 1:
        raise DomainError("bisection of a conditionally convergent alternating series has divergent parts")
    low = ctx if ctx.requested_decimal_digits <= POSITIVE_UNIT_CAP else _ctx_digits(ctx, POSITIVE_UNIT_CAP)
    if cls == "alternating_unit":
        full = _alternating(spec, ctx).value
    else:
        full = sum_series(spec, low, force_cap=True).value
    even = euler_maclaurin(spec, low, 2, 0).value
    odd = euler_maclaurin(spec, low, 2, 1).value
    return BisectionResult(full, even, odd, abs(full - even - odd), POSITIVE_UNIT_CAP)


def bisect_residual(spec: Union[SeriesSpec, GammaRatioSeries], ctx: PrecisionContext):
    """|full sum - (even part + odd part)|."""
    return bisect(spec, ctx).residual


def _ctx_digits(ctx: PrecisionContext, digits: int) -> PrecisionContext:
    from .numcore import ctx_new

    return ctx_new(digits)


# ---------------------------------------------------------------------------
# order-swap residuals: harmonic series vs integral plus correction


@dataclass(frozen=True)
class CoefficientSpec:
    """f_n = q^n (P(n) + inv / (n+1)) with P given by ascending coefficients."""

    poly: tuple = (Fraction(1),)
    inv: Fraction = Fraction(0)
    q: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "poly", tuple(Fraction(c) for c in self.poly))
        object.__setattr__(self, "inv", Fraction(self.inv))
        object.__setattr__(self, "q", Fraction(self.q))
        if not 0 < self.q <= 1:
            raise DomainError("q must lie in (0, 1]")

    @property
    def degree(self) -> int:
        d = -1
        for i, c in enumerate(self.poly):
            if c:
                d = i
        return d

    def value(self, n: int) -> Fraction:
        p = sum((c * n**i for i, c in enumerate(self.poly)), Fraction(0))
        return self.q**n * (p + self.inv / (n + 1))


@dataclass(frozen=True)
class Lemma1Result:
    lhs: object
    rhs: object
    residual: object
    digits: int
    tolerance: object


def _lemma1_series(f: CoefficientSpec, extra_den: int, harmonic_parts: tuple) -> list[SeriesSpec]:
    """Specs summing (q/16)^n binom^2 f_n h_n / (n+1)^extra_den, split into monomials."""
    specs = []
    ratio = f.q / 16
    for j, c in enumerate(f.poly):
        if c:
            w = Weight(((1, 0),) * j, ((1, 1),) * extra_den, c, harmonic_parts)
            specs.append(SeriesSpec(ratio, 2, w))
    if f.inv:
        w = Weight((), ((1, 1),) * (extra_den + 1), f.inv, harmonic_parts)
        specs.append(SeriesSpec(ratio, 2, w))
    return specs


def _stirling2(j: int, i: int) -> int:
    return _stirling2_table(j)[i]


@lru_cache(maxsize=64)
def _stirling2_table(j: int) -> tuple[int, ...]:
    row = [1]
    for n in range(1, j + 1):
        new = [0] * (n + 1)
        for k in range(1, n + 1):
            new[k] = k * (row[k] if k < len(row) else 0) + row[k - 1]
        row = new
    return tuple(row)


def _inner_closed(f: CoefficientSpec, x, xc, ctx: PrecisionContext):
    """sqrt(1-x^2) * sum_n binom(2n,n)/4^n f_n x^(2n), summed in closed form."""
    mp = ctx.mp
    q = ctx.real(f.q)
    wv = q * x * x
    one_minus_x2 = xc * (1 + x)
    one_minus_w = one_minus_x2 if f.q == 1 else 1 - wv
    s = mp.sqrt(one_minus_x2)
    total = mp.zero
    for j, c in enumerate(f.poly):
        if not c:
            continue
        acc = mp.zero
        for i in range(j + 1):
            st = _stirling2(j, i) if j else 1
            if not st:
                continue
            poch = math.prod(Fraction(1, 2) + r for r in range(i))
            acc += ctx.real(st * poch) * wv**i * s / one_minus_w ** (mp.mpf(i) + mp.mpf(0.5))
        total += ctx.real(c) * acc
    if f.inv:
        total += ctx.real(f.inv) * s * 2 / (1 + mp.sqrt(one_minus_w))
    return total


def _sum_many(specs: Sequence[SeriesSpec], ctx: PrecisionContext) -> tuple[object, Optional[int]]:
    total = ctx.mp.zero
    cap = None
    for s in specs:
        c = series_cap(s)
        out = sum_series(s, ctx, force_cap=True)
        total += out.value
        if c is not None:
            cap = c if cap is None else min(cap, c)
    return total, cap


def lemma1_residual(f: CoefficientSpec, ctx: PrecisionContext) -> Lemma1Result:
    """Compare the H'_{2n} series against its integral-plus-correction form."""
    if f.q == 1 and f.degree >= 1:
        raise DomainError("inadmissible coefficients: the series diverges for q = 1 and deg P >= 1")
    if f.degree < 0 and not f.inv:
        raise DomainError("coefficient sequence is identically zero")
    lhs_specs = _lemma1_series(f, 1, (HarmonicPart("H_alt", 1, 2, 0),))
    caps = [series_cap(s) for s in lhs_specs]
    caps += [series_cap(s) for s in _lemma1_series(f, 1, ()) + _lemma1_series(f, 2, ())]
    known = [c for c in caps if c is not None] + [QUADRATURE_CAP]
    digits = min([ctx.requested_decimal_digits] + known)
    from .numcore import ctx_new

    work = ctx if digits == ctx.requested_decimal_digits else ctx_new(digits)
    lhs, _ = _sum_many(lhs_specs, work)
    mp = work.mp

    res = integrate(lambda x, xc, c: _inner_closed(f, x, xc, c) * c.mp.log(x), work)
    integral = 4 * res.value / const_pi(work)
    first, _ = _sum_many(_lemma1_series(f, 1, ()), work)
    second, _ = _sum_many(_lemma1_series(f, 2, ()), work)
    rhs = integral + (2 * const_ln2(work) * first + second) / 2
    tol = mp.mpf(10) ** (-digits) * max(mp.one, abs(rhs))
    return Lemma1Result(lhs, rhs, abs(lhs - rhs), digits, tol)


# ---------------------------------------------------------------------------
# auxiliary identities used by the proof chain


def cauchy_coefficients(n_max: int) -> list[Fraction]:
    """Maclaurin coefficients of 1/((u+1) sqrt(1-u^2)) by exact series multiplication."""
    a = [Fraction((-1) ** n) for n in range(n_max + 1)]  # 1/(1+u)
    b = [Fraction(0)] * (n_max + 1)  # (1-u^2)^(-1/2)
    for m in range(n_max // 2 + 1):
        b[2 * m] = Fraction(central_binom(m), 4**m)
    return [sum((a[i] * b[n - i] for i in range(n + 1)), Fraction(0)) for n in range(n_max + 1)]


def cauchy_formula(n: int) -> Fraction:
    """(-1/2)^n (n+1)! binom(n, floor(n/2)) / n!."""
    return Fraction(-1, 2) ** n * math.factorial(n + 1) * math.comb(n, n // 2) / math.factorial(n)


def o2n_moment_lhs(x: Fraction, ctx: PrecisionContext):
    """sum (1/4)^n binom(2n,n) (1 - x^(4n)) / ((2n-1)(1-x^2)) via two summations."""
    x = Fraction(x)
    if not 0 < x < 1:
        raise DomainError("x must lie in (0, 1)")
    w = rational_weight(den=[lin(2, -1)])
    s1 = sum_series(SeriesSpec(Fraction(1, 4), 1, w), ctx, force_cap=True).value
    s2 = sum_series(SeriesSpec(x**4 / 4, 1, w), ctx).value
    return (s1 - s2) / ctx.real(1 - x * x)


def o2n_moment_rhs(x: Fraction, ctx: PrecisionContext):
    x = Fraction(x)
    return ctx.mp.sqrt(ctx.real(1 - x**4)) / ctx.real(1 - x * x)
