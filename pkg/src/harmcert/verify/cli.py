"""Command-line front end: list, verify, verify-all, replay and eval pfq.

Exit codes: 0 when everything passes, 1 on any identity mismatch, 2 on usage
or evaluation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ..hyper import HypSeriesSpec, pfq_eval
from ..numcore import ctx_new
from .registry import catalog
from .replay import MAX_REPLAY_DIGITS, ReplayFailure, replay_proof, replay_report
from .runner import RunReport, verify_all, verify_one

EXIT_OK, EXIT_MISMATCH, EXIT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _rationals(text: str) -> list[Fraction]:
    if not text.strip():
        return []
    try:
        return [Fraction(part.strip()) for part in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated p/q rationals, got {text!r}") from None


def _rational(text: str) -> Fraction:
    values = _rationals(text)
    if len(values) != 1:
        raise argparse.ArgumentTypeError(f"expected one p/q rational, got {text!r}")
    return values[0]


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="harmcert", description="High-precision verification of binomial-harmonic series identities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="print the identity catalog")

    p = sub.add_parser("verify", help="verify one identity")
    p.add_argument("--id", required=True, dest="rid")
    p.add_argument("--digits", required=True, type=_positive)
    p.add_argument("--method", default="auto", choices=("auto", "direct", "cvz", "quadrature"))
    p.add_argument("--json", metavar="PATH")

    p = sub.add_parser("verify-all", help="verify every catalog identity")
    p.add_argument("--digits", type=_positive, default=30)
    p.add_argument("--filter", dest="filter_", metavar="CLASS_OR_PREFIX")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--json", metavar="PATH")

    p = sub.add_parser("replay", help="replay the proof chain step by step")
    p.add_argument("--digits", required=True, type=_positive)
    p.add_argument("--json", metavar="PATH")

    p = sub.add_parser("eval", help="ad-hoc evaluation")
    what = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = what.add_parser("pfq", help="generalized hypergeometric pFq at a rational argument")
    q.add_argument("--upper", required=True, type=_rationals)
    q.add_argument("--lower", required=True, type=_rationals)
    q.add_argument("--arg", required=True, type=_rational)
    q.add_argument("--digits", required=True, type=_positive)
    q.add_argument("--method", default="auto", choices=("auto", "direct", "cvz", "quadrature"))
    return parser


def _print_results(report: RunReport) -> None:
    for r in report.results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status}  {r.id:<24} {r.digits_agreed:>5}/{r.effective_digits:<5} {r.method:<26} {r.seconds:8.3f}s"
        print(line)
        if r.error:
            print(f"      error: {r.error}")
    s = report.summary
    print(f"{s['passed']}/{s['total']} passed, {s['failed']} failed")


def _cmd_list(_args) -> int:
    for r in sorted(catalog(), key=lambda r: r.id):
        print(f"{r.id:<24} {r.rate_class:<26} cap {r.precision_cap:<5} {r.paper_anchor}")
        print(f"    {r.description}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        result = verify_one(args.rid, args.digits, args.method)
    except KeyError:
        print(f"unknown identity id: {args.rid!r}", file=sys.stderr)
        return EXIT_ERROR
    report = RunReport(args.digits, [result])
    print(f"lhs = {result.lhs}")
    print(f"rhs = {result.rhs}")
    _print_results(report)
    if args.json:
        _write_json(args.json, report.to_dict())
    return EXIT_OK if result.passed else EXIT_MISMATCH


def _cmd_verify_all(args) -> int:
    report = verify_all(args.digits, args.filter_, args.jobs)
    _print_results(report)
    if args.json:
        _write_json(args.json, report.to_dict())
    if any(r.error for r in report.results):
        return EXIT_ERROR
    return EXIT_OK if report.summary["failed"] == 0 else EXIT_MISMATCH


def _cmd_replay(args) -> int:
    if args.digits > MAX_REPLAY_DIGITS:
        print(f"replay supports at most {MAX_REPLAY_DIGITS} digits", file=sys.stderr)
        return EXIT_ERROR
    code = EXIT_OK
    try:
        steps = replay_proof(args.digits)
    except ReplayFailure as failure:
        steps = failure.completed
        code = EXIT_MISMATCH
    for s in steps:
        tag = " [structural]" if s.structural else ""
        print(f"{'PASS' if s.passed else 'FAIL'}  ({s.label:>4}) {s.title}{tag}: residual {s.residual} (tol {s.tolerance})")
        if not s.passed:
            print(f"      lhs = {s.lhs}\n      rhs = {s.rhs}")
    if args.json:
        _write_json(args.json, replay_report(args.digits, steps))
    return code


def _cmd_eval(args) -> int:
    spec = HypSeriesSpec.of(args.upper, args.lower, args.arg)
    ctx = ctx_new(args.digits)
    out = pfq_eval(spec, ctx, args.method)
    shown = min(args.digits, out.digits_cap) if out.digits_cap else args.digits
    print(ctx.mp.nstr(out.value, shown))
    note = f" (capped at {out.digits_cap} digits)" if out.digits_cap and out.digits_cap < args.digits else ""
    print(f"method {out.method}, {out.terms_used} terms{note}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"list": _cmd_list, "verify": _cmd_verify, "verify-all": _cmd_verify_all,
            "replay": _cmd_replay, "eval": _cmd_eval}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except Exception as exc:  # evaluation errors map to exit code 2
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
