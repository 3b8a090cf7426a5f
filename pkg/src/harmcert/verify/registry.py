"""Identity records: a numerically evaluated left side against a closed-form right side."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ..elliptic import ONE_OVER_SQRT2, ell_e, ell_k
from ..hyper import HypSeriesSpec, METHOD_ALIASES, pfq_eval
from ..numcore import DomainError, PrecisionContext
from ..quad import catalog_integral, euler_gamma_integrand, tanh_sinh
from ..series import (
    HarmonicPart,
    SeriesSpec,
    Weight,
    lin,
    series_cap,
    sum_series,
)
from .expr import G, LN2, OPERATIONS, PI, Expr, Q, sqrt

METHOD_CLASSES = ("geometric", "alternating_acceleration", "positive_unit", "quadrature", "agm")
CAPS = {"geometric": 1000, "alternating_acceleration": 30, "positive_unit": 10, "quadrature": 30, "agm": 1000}
ALLOWED_CAPS = frozenset({10, 12, 30, 1000})
LHS_OPERATIONS = frozenset({"sum_series", "pfq_eval", "tanh_sinh", "ell_k", "ell_e"})


@dataclass(frozen=True)
class Evaluation:
    value: object
    count: int
    method: str


# -- left-hand sides ---------------------------------------------------------


@dataclass(frozen=True)
class SeriesSide:
    spec: SeriesSpec
    operation = "sum_series"

    def method_class(self) -> str:
        cls = self.spec.rate_class()
        if cls == "alternating_unit":
            return "alternating_acceleration"
        if cls == "positive_unit":
            return "positive_unit" if series_cap(self.spec) == 10 else "quadrature"
        return cls

    def evaluate(self, ctx: PrecisionContext, method: str = "auto") -> Evaluation:
        natural = self.method_class()
        method = METHOD_ALIASES.get(method, method)
        allowed = {
            "geometric": {"auto", "direct"},
            "alternating_acceleration": {"auto", "alternating_acceleration"},
            "positive_unit": {"auto", "direct"},
            "quadrature": {"auto", "euler_integral_quadrature"},
        }[natural]
        if method not in allowed:
            raise DomainError(f"method {method!r} does not apply to a {natural} series")
        out = sum_series(self.spec, ctx, force_cap=True)
        return Evaluation(out.value, out.terms_used, out.method)


@dataclass(frozen=True)
class HypergeometricSide:
    spec: HypSeriesSpec
    operation = "pfq_eval"

    def method_class(self) -> str:
        cls = self.spec.reduced().convergence_class()
        return {"geometric": "geometric", "terminating": "geometric",
                "alternating_unit": "alternating_acceleration"}.get(cls, "quadrature")

    def evaluate(self, ctx: PrecisionContext, method: str = "auto") -> Evaluation:
        out = pfq_eval(self.spec, ctx, method)
        return Evaluation(out.value, out.terms_used, out.method)


@dataclass(frozen=True)
class IntegralSide:
    """A catalog integrand on (0,1), or the Euler integral of Gamma(s) on the half line."""

    name: str
    euler_s: Optional[Fraction] = None
    operation = "tanh_sinh"

    def method_class(self) -> str:
        return "quadrature"

    def evaluate(self, ctx: PrecisionContext, method: str = "auto") -> Evaluation:
        if method not in ("auto", "quadrature", "euler_integral_quadrature"):
            raise DomainError(f"method {method!r} does not apply to an integral")
        if self.euler_s is not None:
            res = tanh_sinh(euler_gamma_integrand(self.euler_s), ctx)
        else:
            res = catalog_integral(self.name, ctx)
        return Evaluation(res.value, res.nodes, "tanh_sinh")


@dataclass(frozen=True)
class EllipticSide:
    kind: str  # "K" or "E"
    operation = "agm"

    def method_class(self) -> str:
        return "agm"

    def evaluate(self, ctx: PrecisionContext, method: str = "auto") -> Evaluation:
        if method not in ("auto", "direct"):
            raise DomainError(f"method {method!r} does not apply to an AGM evaluation")
        fn = ell_k if self.kind == "K" else ell_e
        return Evaluation(fn(ONE_OVER_SQRT2, ctx), 0, "agm")


Side = Union[SeriesSide, HypergeometricSide, IntegralSide, EllipticSide]


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    description: str
    paper_anchor: str
    lhs: Side
    rhs: Expr
    method: str
    precision_cap: int

    @property
    def rate_class(self) -> str:
        if isinstance(self.lhs, SeriesSide) and self.method == "geometric":
            return f"geometric({self.lhs.spec.rate})"
        return self.method


# -- catalog -----------------------------------------------------------------

G14 = G(1, 4) ** 2
G34 = G(3, 4) ** 2
PI32 = PI ** Fraction(3, 2)
SQRT_PI = sqrt(PI)
SQRT_2PI = sqrt(2 * PI)


def _h(kind: str, coef=1, mult: int = 1) -> HarmonicPart:
    return HarmonicPart(kind, Fraction(coef), mult, 0)


def _series(c, p, num=(), den=(), harmonic=(), scale=1) -> SeriesSide:
    return SeriesSide(SeriesSpec(Fraction(c), p, Weight(tuple(num), tuple(den), Fraction(scale), tuple(harmonic))))


SUN_MIX = (_h("H", 2, 2), _h("H", -1))
QUARTER = Fraction(1, 4)


def _records() -> list[IdentityRecord]:
    lemA = G14 / (4 * SQRT_2PI)
    lemB = sqrt(2 * PI**3) / G14
    e_sing = G14 / (8 * SQRT_PI) + PI32 / G14
    rows = [
        ("sun2", "sum (1/32)^k binom(2k,k)^2 (2H_{2k} - H_k)", "rate-1/2 conjecture, non-alternating case",
         _series(Fraction(1, 32), 2, harmonic=SUN_MIX), LN2 * G14 / (4 * PI * SQRT_PI)),
        ("sun1", "sum (-1/16)^k binom(2k,k)^2 (2H_{2k} - H_k)", "rate-1/2 conjecture, alternating case",
         _series(Fraction(-1, 16), 2, harmonic=SUN_MIX), -LN2 * G14 / (4 * PI * SQRT_2PI)),
        ("from_bailey_end", "sum (1/32)^k binom(2k,k)^2 H_{2k}", "new H_{2k} evaluation closing the proof",
         _series(Fraction(1, 32), 2, harmonic=(_h("H", 1, 2),)), (PI - 3 * LN2) * G14 / (8 * PI32)),
        ("tauraso", "sum (1/32)^k binom(2k,k)^2 H_k", "Bailey 2F1(1/2) differentiated at a = 1/2",
         _series(Fraction(1, 32), 2, harmonic=(_h("H"),)), SQRT_PI * (PI - 4 * LN2) / (2 * G34)),
        ("main_desired", "sum (1/32)^n binom(2n,n)^2 (H_{2n} - H_n)", "alternating-harmonic series of the main proof",
         _series(Fraction(1, 32), 2, harmonic=(_h("H_alt", 1, 2),)), (5 * LN2 - PI) * G14 / (8 * PI32)),
        ("chu_campbell_thm4_a", "sum (-1/16)^k binom(2k,k)^2 H_k", "linearization theorem, H_k case",
         _series(Fraction(-1, 16), 2, harmonic=(_h("H"),)), G14 * (PI - 5 * LN2) / (4 * sqrt(2 * PI**3))),
        ("chu_campbell_thm4_b", "sum (-1/16)^k binom(2k,k)^2 H_{2k}", "linearization theorem, H_{2k} case",
         _series(Fraction(-1, 16), 2, harmonic=(_h("H", 1, 2),)), G14 * (PI - 6 * LN2) / (8 * sqrt(2 * PI**3))),
        ("campbell_hk_kp1", "sum (1/32)^k binom(2k,k)^2 H_k/(k+1)", "beta-integral H_k/(k+1) series",
         _series(Fraction(1, 32), 2, den=[lin(1, 1)], harmonic=(_h("H"),)),
         8 - 2 * G14 / PI32 - (4 * PI32 + 16 * SQRT_PI * LN2) / G14),
        ("h2k_2km1", "sum (1/32)^k binom(2k,k)^2 H_{2k}/(2k-1)", "Fourier-Legendre H_{2k}/(2k-1) series",
         _series(Fraction(1, 32), 2, den=[lin(2, -1)], harmonic=(_h("H", 1, 2),)),
         SQRT_PI * (PI + 3 * LN2 - 4) / (2 * G14) - G14 * (PI - 3 * LN2 - 2) / (16 * PI32)),
        ("h2k_kp1", "sum (1/32)^k binom(2k,k)^2 H_{2k}/(k+1)", "Fourier-Legendre H_{2k}/(k+1) series",
         _series(Fraction(1, 32), 2, den=[lin(1, 1)], harmonic=(_h("H", 1, 2),)),
         4 - 3 * G14 / (2 * PI32) - 2 * SQRT_PI * (PI + 3 * LN2 - 4) / G14),
        ("bailey_base", "sum (1/32)^k binom(2k,k)^2", "Bailey 2F1(1/2) at a = 1/2, c = 1",
         _series(Fraction(1, 32), 2), SQRT_PI / G34),
        ("gf_binomsq_32", "sum (1/32)^n binom(2n,n)^2/(n+1)", "binom^2/(n+1) generating function at y = 1/32",
         _series(Fraction(1, 32), 2, den=[lin(1, 1)]), 8 * SQRT_PI / G14),
        ("choi_chen", "sum (1/16)^k binom(2k,k)^2 H_k/(2k-1)^2", "rate-1 H_k/(2k-1)^2 series",
         _series(Fraction(1, 16), 2, den=[lin(2, -1), lin(2, -1)], harmonic=(_h("H"),)), (12 - 16 * LN2) / PI),
        ("lemniscate_A", "integral of 1/sqrt(1-t^4) over [0,1]", "lemniscate constant A, integral form",
         IntegralSide("lemniscate_A"), lemA),
        ("lemniscate_B", "integral of t^2/sqrt(1-t^4) over [0,1]", "lemniscate constant B, integral form",
         IntegralSide("lemniscate_B"), lemB),
        ("lemniscate_A_series", "sum (1/4)^n binom(2n,n)/(4n+1)", "lemniscate constant A, series form",
         _series(QUARTER, 1, den=[lin(4, 1)]), lemA),
        ("lemniscate_B_series", "sum (1/4)^n binom(2n,n)/(4n+3)", "lemniscate constant B, series form",
         _series(QUARTER, 1, den=[lin(4, 3)]), lemB),
        ("almost_poised_direct", "sum (1/4)^n binom(2n,n)/(4n+3)^2", "almost-poised Dixon, direct consequence",
         _series(QUARTER, 1, den=[lin(4, 3), lin(4, 3)]), (4 - PI) * G34 / (4 * SQRT_2PI)),
        ("dixon_lemniscate_sq", "sum (1/4)^n binom(2n,n)/(4n+1)^2", "Dixon well-poised 3F2(1) at (1/2, 1/4, 1/4)",
         _series(QUARTER, 1, den=[lin(4, 1), lin(4, 1)]), G(5, 4) ** 3 * G(3, 4) / G(3, 2)),
        ("slovaca1", "sum (1/4)^k binom(2k,k) O_{2k}/(4k+1)", "odd-harmonic lemniscate-like constant, 4k+1",
         _series(QUARTER, 1, den=[lin(4, 1)], harmonic=(_h("O", 1, 2),)), 3 * G14 * LN2 / (16 * SQRT_2PI)),
        ("slovaca2", "sum (1/4)^n binom(2n,n) O_{2n}/(4n+3)", "odd-harmonic lemniscate-like constant, 4n+3",
         _series(QUARTER, 1, den=[lin(4, 3)], harmonic=(_h("O", 1, 2),)),
         PI32 * (3 * LN2 + 2) / (2 * sqrt(2) * G14)),
        ("e_imaginary_series", "sum (1/4)^n binom(2n,n) O_{2n}/(2n-1)", "odd-harmonic moment sum equal to E(i)",
         _series(QUARTER, 1, den=[lin(2, -1)], harmonic=(_h("O", 1, 2),)), sqrt(2) * e_sing),
        ("e_imaginary_integral", "integral of sqrt(1-x^4)/(1-x^2) over [0,1]", "E(i) as an integral",
         IntegralSide("e_imaginary"), sqrt(2) * e_sing),
        ("3f2_ccd", "3F2[1/2, 1, 5/4; 3/2, 7/4; 1]", "Watson-derived 3F2(1) evaluation",
         HypergeometricSide(HypSeriesSpec.of((Fraction(1, 2), 1, Fraction(5, 4)), (Fraction(3, 2), Fraction(7, 4)), 1)),
         3 - 6 * PI**3 / G14**2),
        ("index_shift_3f2", "3F2[1, 1, 7/4; 2, 9/4; 1]", "digamma limit of the Luke reduction",
         HypergeometricSide(HypSeriesSpec.of((1, 1, Fraction(7, 4)), (2, Fraction(9, 4)), 1)),
         Q(5, 3) * (4 - PI / 2 - LN2)),
        ("catalan_gf", "sum (1/4)^n binom(2n,n)/(n+1)", "Catalan generating function at 1",
         _series(QUARTER, 1, den=[lin(1, 1)]), Q(2)),
        ("split_total", "integral of sqrt(1-x^2)(x^2-4) ln x/(2-x^2)^(3/2)", "integral left after the binomial reduction",
         IntegralSide("split_total"), sqrt(2) * PI32 / G14 + (sqrt(PI / 2) / 16 - LN2 / (16 * SQRT_2PI)) * G14),
        ("heavy", "integral of sqrt(1-x^2) ln x/(2-x^2)^(3/2)", "remaining integral of the main proof",
         IntegralSide("part_heavy"),
         G14 * (4 - 2 * PI + 2 * LN2) / (64 * SQRT_2PI) - PI32 * (PI + LN2) / (4 * sqrt(2) * G14)),
        ("ell_K_singular", "K(1/sqrt 2) by the AGM", "elliptic singular value, first kind",
         EllipticSide("K"), G14 / (4 * SQRT_PI)),
        ("ell_E_singular", "E(1/sqrt 2) by the AGM", "elliptic singular value, second kind",
         EllipticSide("E"), e_sing),
        ("gamma_quarter_integral", "integral of u^(-3/4) e^(-u) over (0, inf)", "Euler integral for Gamma(1/4)",
         IntegralSide("euler_gamma", Fraction(1, 4)), G(1, 4)),
    ]
    out = []
    for rid, desc, anchor, lhs, rhs in rows:
        method = lhs.method_class()
        out.append(IdentityRecord(rid, desc, anchor, lhs, rhs, method, CAPS[method]))
    return out


_CATALOG: Optional[tuple[IdentityRecord, ...]] = None


def catalog() -> list[IdentityRecord]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = tuple(_records())
    return list(_CATALOG)


def get_record(rid: str) -> IdentityRecord:
    for r in catalog():
        if r.id == rid:
            return r
    raise KeyError(f"unknown identity id {rid!r}")


def self_test() -> list[str]:
    """Problems with the registry; empty when every record is well formed."""
    problems = []
    seen = set()
    for r in catalog():
        if r.id in seen:
            problems.append(f"{r.id}: duplicate id")
        seen.add(r.id)
        if r.precision_cap not in ALLOWED_CAPS:
            problems.append(f"{r.id}: cap {r.precision_cap}")
        if not r.rhs.operations() <= OPERATIONS:
            problems.append(f"{r.id}: rhs uses {r.rhs.operations() - OPERATIONS}")
        if r.lhs.operation not in LHS_OPERATIONS | {"agm"}:
            problems.append(f"{r.id}: lhs operation {r.lhs.operation}")
        if not r.paper_anchor:
            problems.append(f"{r.id}: missing anchor")
    return problems
