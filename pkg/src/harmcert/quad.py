"""Double-exponential quadrature at arbitrary precision.

Integrands are called as ``f(x, xc, ctx)`` where ``xc`` is ``b - x`` computed
without cancellation (``None`` on the half line).  Singularities at the end
points of the form ``x^s``, ``(1-x)^s`` (s > -1) and ``log`` are absorbed by
the transform, provided the integrand uses ``xc`` near the upper end.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .numcore import (
    ConvergenceError,
    DomainError,
    PrecisionContext,
    const_euler,
    const_ln2,
    harmonic,
)
from .special import digamma

Integrand = Callable[..., object]

MIN_LEVEL = 3
MAX_LEVEL = 14
SINGULARITY_CLASSES = ("none", "log", "inverse_sqrt", "exp_decay")
HALF_LINE = "half_line"


@dataclass(frozen=True)
class IntegrandSpec:
    name: str
    func: Integrand = field(compare=False, repr=False)
    interval: tuple = (Fraction(0), Fraction(1))  # or HALF_LINE
    singularities: tuple = ("none", "none")

    def __post_init__(self) -> None:
        for s in self.singularities:
            if s not in SINGULARITY_CLASSES:
                raise DomainError(f"unknown singularity class {s!r}")
        if self.interval == HALF_LINE:
            return
        a, b = (Fraction(v) for v in self.interval)
        if not 0 <= a < b <= 1:
            raise DomainError(f"interval {self.interval} must satisfy 0 <= a < b <= 1")
        object.__setattr__(self, "interval", (a, b))


@dataclass(frozen=True)
class QuadResult:
    value: object
    levels_used: int
    last_level_delta: object
    nodes: int = 0


# ---------------------------------------------------------------------------
# node tables: (bits, level, kind) -> list of nodes, grown lazily in tau


class _NodeTable:
    __slots__ = ("nodes", "exhausted", "lock")

    def __init__(self) -> None:
        self.nodes: list[tuple] = []
        self.exhausted = False
        self.lock = threading.Lock()


_TABLES: dict[tuple, _NodeTable] = {}
_TABLES_LOCK = threading.Lock()


def _table(key: tuple) -> _NodeTable:
    t = _TABLES.get(key)
    if t is None:
        with _TABLES_LOCK:
            t = _TABLES.setdefault(key, _NodeTable())
    return t


def _index_stream(level: int):
    # level MIN_LEVEL uses every j >= 0; finer levels only the new odd j
    if level == MIN_LEVEL:
        j = 0
        while True:
            yield j
            j += 1
    else:
        j = 1
        while True:
            yield j
            j += 2


def _tanh_sinh_node(mp, tau, pi):
    # u = exp(-pi sinh tau); x = 1/(1+u) and its complement u/(1+u)
    u = mp.exp(-pi * mp.sinh(tau))
    d = 1 + u
    w = pi * mp.cosh(tau) * u / (d * d)
    return u, 1 / d, u / d, w


def _exp_sinh_node(mp, tau, pi):
    half_pi = pi / 2
    s = half_pi * mp.sinh(tau)
    x = mp.exp(s)
    xi = mp.exp(-s)
    c = half_pi * mp.cosh(tau)
    return x, xi, c * x, c * xi


def _nodes(ctx: PrecisionContext, level: int, kind: str, count: int) -> list[tuple]:
    """At least ``count`` nodes (fewer if the table hits the hard cutoff)."""
    table = _table((ctx.working_bits, level, kind))
    if len(table.nodes) >= count or table.exhausted:
        return table.nodes
    with table.lock:
        mp = ctx.mp
        from .numcore import const_pi

        pi = const_pi(ctx)
        h = mp.ldexp(mp.one, -level)
        cutoff = mp.ldexp(mp.one, -32 * ctx.working_bits)
        nodes = table.nodes
        stream = _index_stream(level)
        for _ in range(len(nodes)):
            next(stream)
        while len(nodes) < count and not table.exhausted:
            j = next(stream)
            tau = j * h
            if kind == "ts":
                u, x, xc, w = _tanh_sinh_node(mp, tau, pi)
                nodes.append((j, x, xc, w))
                if u < cutoff:
                    table.exhausted = True
            else:
                x, xi, wx, wi = _exp_sinh_node(mp, tau, pi)
                nodes.append((j, x, xi, wx, wi))
                if xi < cutoff:
                    table.exhausted = True
    return table.nodes


def _level_sum(f, ctx, level, kind, j_max, scale, a, width):
    """Sum of weighted integrand values over the new nodes of ``level``.

    With ``j_max`` None the walk stops once both mirrored contributions are
    negligible; the index reached is returned so finer levels stay in range.
    """
    mp = ctx.mp
    eps = ctx.eps
    total = mp.zero
    count = 0
    quiet = 0
    last_j = 0
    i = 0
    while True:
        table = _nodes(ctx, level, kind, i + 64)
        if i >= len(table):
            if j_max is None:
                raise ConvergenceError("quadrature tail did not decay before the node cutoff")
            break
        node = table[i]
        i += 1
        j = node[0]
        if j_max is not None and j > j_max:
            break
        if kind == "ts":
            _, x, xc, w = node
            hi = f(a + width * x, width * xc, ctx)
            contrib = w * hi
            count += 1
            if j:
                lo = f(a + width * xc, width * x, ctx)
                contrib += w * lo
                count += 1
        else:
            _, x, xi, wx, wi = node
            contrib = wx * f(x, None, ctx)
            count += 1
            if j:
                contrib += wi * f(xi, None, ctx)
                count += 1
        total += contrib
        last_j = j
        if j_max is None:
            ref = max(abs(total), abs(scale))
            if j > 4 and abs(contrib) <= eps * ref:
                quiet += 1
                if quiet >= 3:
                    break
            else:
                quiet = 0
    return total, count, last_j


def _target(ctx: PrecisionContext):
    # agreement goal: requested digits plus 10 bits (convergence is quadratic,
    # so the returned level is far more accurate than the measured delta)
    mp = ctx.mp
    bits = math.ceil(ctx.requested_decimal_digits * math.log2(10)) + 10
    return mp.ldexp(mp.one, -bits)


def integrate(f: Integrand, ctx: PrecisionContext, interval=(0, 1), max_level: int = MAX_LEVEL) -> QuadResult:
    """Integrate ``f(x, xc, ctx)`` over ``interval`` (a subinterval of [0,1] or HALF_LINE)."""
    mp = ctx.mp
    if interval == HALF_LINE:
        kind, a, width = "es", mp.zero, mp.one
    else:
        lo, hi = (Fraction(v) for v in interval)
        kind, a, width = "ts", ctx.real(lo), ctx.real(hi - lo)
    target = _target(ctx)
    raw, nodes, j_max = _level_sum(f, ctx, MIN_LEVEL, kind, None, mp.zero, a, width)
    j_max = max(j_max, 8) << 1  # index bound is in units of the finest step so far
    prev = raw * mp.ldexp(width, -MIN_LEVEL)
    delta = None
    for level in range(MIN_LEVEL + 1, max_level + 1):
        new, n, _ = _level_sum(f, ctx, level, kind, j_max, prev, a, width)
        nodes += n
        raw += new
        value = raw * mp.ldexp(width, -level)
        delta = abs(value - prev)
        ctx.check_finite(value, "quadrature sum")
        if delta <= target * max(mp.one, abs(value)) and level > MIN_LEVEL + 1:
            return QuadResult(value, level, delta, nodes)
        prev = value
        j_max <<= 1
    raise ConvergenceError(f"tanh-sinh did not converge by level {max_level} (delta {mp.nstr(delta, 5)})")


def tanh_sinh(spec: IntegrandSpec, ctx: PrecisionContext) -> QuadResult:
    return integrate(spec.func, ctx, spec.interval)


# ---------------------------------------------------------------------------
# catalog of named integrands


def _sqrt_one_minus_sq(x, xc, mp):
    # sqrt(1 - x^2) with 1 - x supplied
    return mp.sqrt(xc * (1 + x))


def _f_log(x, xc, ctx):
    return ctx.mp.log(x)


def _f_lemniscate_a(x, xc, ctx):
    mp = ctx.mp
    return 1 / mp.sqrt(xc * (1 + x) * (1 + x * x))


def _f_lemniscate_b(x, xc, ctx):
    mp = ctx.mp
    return x * x / mp.sqrt(xc * (1 + x) * (1 + x * x))


def _f_e_imaginary(x, xc, ctx):
    # sqrt(1 - x^4)/(1 - x^2) = sqrt(1 + x^2) / sqrt(1 - x^2)
    mp = ctx.mp
    return mp.sqrt(1 + x * x) / _sqrt_one_minus_sq(x, xc, mp)


def _f_split_total(x, xc, ctx):
    mp = ctx.mp
    x2 = x * x
    return _sqrt_one_minus_sq(x, xc, mp) * (x2 - 4) * mp.log(x) / (2 - x2) ** mp.mpf(1.5)


def _f_part_flat(x, xc, ctx):
    mp = ctx.mp
    return mp.sqrt(xc * (1 + x) / (2 - x * x)) * mp.log(x)


def _f_part_heavy(x, xc, ctx):
    mp = ctx.mp
    return _sqrt_one_minus_sq(x, xc, mp) * mp.log(x) / (2 - x * x) ** mp.mpf(1.5)


def _f_heavy_u(u, uc, ctx):
    # the same integral after 1 - x^2 = u
    mp = ctx.mp
    return mp.sqrt(u) * mp.log(uc) / ((1 + u) ** mp.mpf(1.5) * mp.sqrt(uc)) / 4


def _f_after_change(u, uc, ctx):
    mp = ctx.mp
    return mp.sqrt(u) * mp.log(uc) / mp.sqrt(uc * (1 + u)) / 4


PROOF_INTEGRALS: dict[str, IntegrandSpec] = {
    "split_total": IntegrandSpec("split_total", _f_split_total, singularities=("log", "inverse_sqrt")),
    "part_flat": IntegrandSpec("part_flat", _f_part_flat, singularities=("log", "none")),
    "part_heavy": IntegrandSpec("part_heavy", _f_part_heavy, singularities=("log", "none")),
    "heavy": IntegrandSpec("heavy", _f_heavy_u, singularities=("none", "inverse_sqrt")),
    "after_change": IntegrandSpec("after_change", _f_after_change, singularities=("none", "inverse_sqrt")),
}

CATALOG: dict[str, IntegrandSpec] = {
    "log": IntegrandSpec("log", _f_log, singularities=("log", "none")),
    "lemniscate_A": IntegrandSpec("lemniscate_A", _f_lemniscate_a, singularities=("none", "inverse_sqrt")),
    "lemniscate_B": IntegrandSpec("lemniscate_B", _f_lemniscate_b, singularities=("none", "inverse_sqrt")),
    "e_imaginary": IntegrandSpec("e_imaginary", _f_e_imaginary, singularities=("none", "inverse_sqrt")),
    **PROOF_INTEGRALS,
}


def proof_integral(name: str, ctx: PrecisionContext):
    """Value of a named integral from the proof chain by tanh-sinh."""
    try:
        spec = PROOF_INTEGRALS[name]
    except KeyError:
        raise DomainError(f"unknown proof integral {name!r}; known: {sorted(PROOF_INTEGRALS)}") from None
    return tanh_sinh(spec, ctx).value


def catalog_integral(name: str, ctx: PrecisionContext) -> QuadResult:
    try:
        spec = CATALOG[name]
    except KeyError:
        raise DomainError(f"unknown integrand {name!r}; known: {sorted(CATALOG)}") from None
    return tanh_sinh(spec, ctx)


def euler_gamma_integrand(s: Fraction) -> IntegrandSpec:
    """u^(s-1) e^(-u) on the half line, the defining integral of Gamma(s)."""
    s = Fraction(s)
    if s <= 0:
        raise DomainError("Euler integral needs s > 0")

    def f(x, _xc, ctx):
        mp = ctx.mp
        return mp.exp((ctx.real(s) - 1) * mp.log(x) - x)

    return IntegrandSpec(f"euler_gamma({s})", f, HALF_LINE, ("none", "exp_decay"))


def log_moment_integrand(n: int) -> IntegrandSpec:
    def f(u, uc, ctx):
        mp = ctx.mp
        return u**n * mp.sqrt(u) * mp.log(uc)

    return IntegrandSpec(f"log_moment({n})", f, singularities=("none", "log"))


def log_moment(n: int, ctx: PrecisionContext):
    """Integral of u^(n+1/2) ln(1-u) over [0,1] via the odd-harmonic closed form."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    m = 2 * n + 3
    w = ctx.extended(8)
    exact = -4 * harmonic("O", n + 1) - Fraction(4, m)
    value = (4 * const_ln2(w) + w.real(exact)) / m
    return ctx.mp.mpf(value)


def log_moment_digamma(n: int, ctx: PrecisionContext):
    """The same moment as -2(psi(n+5/2) + gamma)/(2n+3)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    w = ctx.extended(8)
    value = -2 * (digamma(Fraction(2 * n + 5, 2), w) + const_euler(w)) / (2 * n + 3)
    return ctx.mp.mpf(value)


def log_moment_quadrature(n: int, ctx: PrecisionContext):
    return tanh_sinh(log_moment_integrand(n), ctx).value
