"""Random admissible parameter draws for the closed-form summation theorems.

Each sampler returns ``(args, oracle_spec)``: the theorem's arguments and the
HypSeriesSpec it claims to sum.  Draws keep a convergence margin of at least
1/10 and, at unit argument, a lower > upper > 0 pair so the Euler-integral
route applies.  Draws that land on a gamma pole are rejected and redrawn.
"""

import random
from fractions import Fraction

from harmcert.hyper import (
    HypSeriesSpec,
    bailey_half,
    chu_almost_poised,
    dixon_wellpoised,
    gauss_unit,
    luke_digamma,
    luke_reduce_3f2,
    pfq_eval,
    watson_3f2,
)
from harmcert.numcore import DomainError

MARGIN = Fraction(1, 10)


def _q(rng: random.Random, lo, hi, den=12) -> Fraction:
    lo, hi = Fraction(lo), Fraction(hi)
    if hi < lo:
        raise DomainError("empty parameter range")
    d = rng.randint(1, den)
    if -(-lo * d // 1) > hi * d // 1:
        d = den * 10  # the range holds no fraction with a small denominator
    n_lo, n_hi = -(-lo * d // 1), hi * d // 1
    return Fraction(rng.randint(int(n_lo), int(n_hi)), d)


def _gauss(rng):
    a, b = _q(rng, -2, 2), _q(rng, -2, 2)
    c = a + b + _q(rng, MARGIN, 3)
    return (a, b, c), HypSeriesSpec.of([a, b], [c], 1)


def _bailey(rng):
    a, c = _q(rng, -3, 3), _q(rng, MARGIN, 4)
    return (a, c), HypSeriesSpec.of([a, 1 - a], [c], Fraction(1, 2))


def _dixon(rng):
    a = _q(rng, MARGIN, 3)
    b = _q(rng, MARGIN, Fraction(9, 10))
    c = _q(rng, MARGIN, min(Fraction(9, 10), 1 + a / 2 - b - MARGIN))
    return (a, b, c), HypSeriesSpec.of([a, b, c], [1 + a - b, 1 + a - c], 1)


def _watson(rng):
    a, b = _q(rng, -1, 2), _q(rng, -1, 2)
    c = _q(rng, max(Fraction(1, 4), (a + b - 1) / 2 + MARGIN), 3)
    return (a, b, c), HypSeriesSpec.of([a, b, c], [(a + b + 1) / 2, 2 * c], 1)


def _chu(rng):
    a = _q(rng, MARGIN, 3)
    b = _q(rng, MARGIN, Fraction(19, 10))
    c = _q(rng, MARGIN, min(Fraction(19, 10), (4 + a - 2 * b) / 2 - MARGIN))
    return (a, b, c), HypSeriesSpec.of([a, b, c], [2 + a - b, 2 + a - c], 1)


def _luke(rng):
    a, b = _q(rng, -2, 3), _q(rng, -2, 3)
    c = _q(rng, Fraction(1, 2), 4)
    kind = rng.random()
    if kind < 0.3:
        z = Fraction(1)
        c = max(c, a + b - 1 + MARGIN)
    elif kind < 0.45:
        z = Fraction(-1)
        c = max(c, a + b - 1 + MARGIN)
    else:
        z = _q(rng, Fraction(-9, 10), Fraction(9, 10))
    return (a, b, c, z), HypSeriesSpec.of([a, b, 1], [c, 2], z)


def _digamma(rng):
    a = _q(rng, -2, 3)
    c = a + _q(rng, MARGIN, 3)
    return (a, c), HypSeriesSpec.of([a, 1, 1], [c, 2], 1)


THEOREMS = {
    "gauss_unit": (gauss_unit, _gauss),
    "bailey_half": (bailey_half, _bailey),
    "dixon_wellpoised": (dixon_wellpoised, _dixon),
    "watson_3f2": (watson_3f2, _watson),
    "chu_almost_poised": (chu_almost_poised, _chu),
    "luke_reduce_3f2": (luke_reduce_3f2, _luke),
    "luke_digamma": (luke_digamma, _digamma),
}


def draw(name: str, rng: random.Random, tries: int = 200):
    """An admissible draw for ``name``: parameters the theorem accepts."""
    fn, sampler = THEOREMS[name]
    for _ in range(tries):
        try:
            args, spec = sampler(rng)
            fn(*args, _PROBE)
        except (DomainError, ZeroDivisionError):
            continue
        return args, spec
    raise RuntimeError(f"no admissible draw for {name}")


def compare(name: str, args, spec, ctx):
    """(closed form, independent summation) at ``ctx``."""
    fn, _ = THEOREMS[name]
    closed = fn(*args, ctx)
    method = "direct" if spec.convergence_class() in ("geometric", "terminating") else "auto"
    return closed, pfq_eval(spec, ctx, method).value


def _probe_ctx():
    from harmcert.numcore import ctx_new

    return ctx_new(5)


_PROBE = _probe_ctx()
