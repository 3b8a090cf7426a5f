"""Verification of catalog identities and JSON run reports."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

from ..numcore import ctx_new, digits_agreed
from .registry import METHOD_CLASSES, IdentityRecord, catalog, get_record

SCHEMA_VERSION = 1
HIGH_GUARD = 64
TIE_BREAK_GUARD = 128


@dataclass
class VerificationResult:
    id: str
    description: str
    paper_anchor: str
    method: str
    terms_or_nodes: int
    requested_digits: int
    effective_digits: int
    lhs: str
    rhs: str
    digits_agreed: int
    passed: bool
    seconds: float
    error: Optional[str] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass
class RunReport:
    requested_digits: int
    results: list

    @property
    def summary(self) -> dict:
        passed = sum(1 for r in self.results if r.passed)
        return {"total": len(self.results), "passed": passed, "failed": len(self.results) - passed}

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "requested_digits": self.requested_digits,
            "results": [r.to_dict() for r in self.results],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _agreement(record: IdentityRecord, ctx, method: str, digits: int):
    lhs = record.lhs.evaluate(ctx, method)
    rhs = record.rhs.evaluate(ctx)
    return lhs, rhs, digits_agreed(lhs.value, rhs, digits)


def verify_one(rid: str, digits: int, method: str = "auto") -> VerificationResult:
    """Evaluate both sides at the effective precision and again with 64 extra bits.

    The reported agreement is the smaller of the cross-side agreement at the
    higher precision and each side's stability between the two precisions.  An
    agreement one digit short of the target triggers a re-run at +128 bits.
    Raises KeyError for an unknown id; evaluation errors propagate.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    record = get_record(rid)
    effective = min(digits, record.precision_cap)
    start = time.perf_counter()
    base = ctx_new(effective)
    lhs0 = record.lhs.evaluate(base, method)
    rhs0 = record.rhs.evaluate(base)
    hi = base.extended(HIGH_GUARD)
    lhs1, rhs1, cross = _agreement(record, hi, method, effective)
    stable = min(digits_agreed(lhs0.value, lhs1.value, effective), digits_agreed(rhs0, rhs1, effective))
    agreed = min(cross, stable)
    if agreed == effective - 1:
        lhs1, rhs1, agreed = _agreement(record, base.extended(TIE_BREAK_GUARD), method, effective)
    mp = hi.mp
    shown = effective + 2
    return VerificationResult(
        id=record.id,
        description=record.description,
        paper_anchor=record.paper_anchor,
        method=lhs1.method if record.method != "positive_unit" else "positive_unit",
        terms_or_nodes=lhs1.count,
        requested_digits=digits,
        effective_digits=effective,
        lhs=mp.nstr(lhs1.value, shown, strip_zeros=False),
        rhs=mp.nstr(rhs1, shown, strip_zeros=False),
        digits_agreed=agreed,
        passed=agreed >= effective,
        seconds=round(time.perf_counter() - start, 3),
    )


def _safe_verify(args: tuple) -> VerificationResult:
    rid, digits, method = args
    try:
        return verify_one(rid, digits, method)
    except Exception as exc:  # recorded, not raised
        record = get_record(rid)
        return VerificationResult(
            record.id, record.description, record.paper_anchor, record.method, 0, digits,
            min(digits, record.precision_cap), "", "", 0, False, 0.0, f"{type(exc).__name__}: {exc}",
        )


def select(filter_: Optional[str] = None) -> list[IdentityRecord]:
    """Records whose method class equals ``filter_`` (or starts with it), else id-prefix matches."""
    records = sorted(catalog(), key=lambda r: r.id)
    if not filter_:
        return records
    classes = [c for c in METHOD_CLASSES if c == filter_ or c.startswith(filter_)]
    if classes:
        return [r for r in records if r.method in classes]
    return [r for r in records if r.id.startswith(filter_)]


def verify_all(digits: int, filter_: Optional[str] = None, workers: int = 1, method: str = "auto") -> RunReport:
    if digits < 1:
        raise ValueError("digits must be positive")
    if workers < 1:
        raise ValueError("workers must be positive")
    jobs = [(r.id, digits, method) for r in select(filter_)]
    if workers == 1 or len(jobs) <= 1:
        results = [_safe_verify(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_safe_verify, jobs))
    results.sort(key=lambda r: r.id)
    return RunReport(digits, results)
