"""Command-line interface: ``baker-kit {prove,search,cf,reduce,constants}``.

Exit codes: 0 success, 1 mathematical or certification failure, 2 usage error.
``BAKER_KIT_PRECISION`` overrides the default starting precision.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path
from typing import Sequence

from .algebraic import build_constants, constants_summary
from .codec import jsonable
from .instances import InstanceError, InstanceSpec, load_value_spec
from .numerics import CertificationError, PrecisionPolicy
from .pipeline import prove_main, reduction_result_dict
from .reduction import (
    PrecisionExhausted,
    ReductionResult,
    ReductionStatus,
    continued_fraction,
    continued_fraction_beyond,
    dp_reduce,
)
from .report import ReportDocument, render_text
from .search import distinct_values, find_products, find_squares

ENV_PRECISION = "BAKER_KIT_PRECISION"
DEFAULT_PRECISION = 192
DEFAULT_CAP = 4096

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} is not positive")
    return value


def default_precision() -> int:
    raw = os.environ.get(ENV_PRECISION)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{ENV_PRECISION}: {exc}") from None


def _policy(args) -> PrecisionPolicy:
    if args.precision_cap < args.precision:
        raise UsageError("--precision-cap must be at least --precision")
    return PrecisionPolicy(args.precision, args.precision_cap)


def _inputs(args) -> dict:
    skip = {"func", "out", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_prove(args) -> tuple[int, ReportDocument]:
    cert = prove_main(_policy(args), snap_to_reference=not args.no_snap)
    doc = ReportDocument("prove", _inputs(args), cert.to_dict(), dict(cert.timings))
    return (EXIT_OK if cert.verdict else EXIT_FAILURE), doc


def cmd_search(args) -> tuple[int, ReportDocument]:
    start = time.perf_counter()
    if args.squares_only:
        sols = find_squares(args.m_max, args.n_max)
    else:
        sols = find_products(args.m_max, args.n_max, args.k_max, both_orders=args.both_orders)
    body = {
        "ranges": [args.m_max, args.n_max, args.k_max],
        "squares_only": args.squares_only,
        "both_orders": args.both_orders,
        "solutions": [list(s.as_tuple()) for s in sols],
        "values": [str(s.value) for s in sols],
        "distinct_values": [str(v) for v in distinct_values(sols)],
        "count": len(sols),
    }
    return EXIT_OK, ReportDocument("search", _inputs(args), body,
                                   {"search": round(time.perf_counter() - start, 6)})


def _value_source(spec: str):
    if spec == "tau":
        return lambda p: build_constants(p).tau
    return load_value_spec(spec)


def cmd_cf(args) -> tuple[int, ReportDocument]:
    start = time.perf_counter()
    try:
        source = _value_source(args.value)
    except InstanceError as exc:
        raise UsageError(str(exc)) from None
    body = {"value": args.value, "terms": args.terms}
    try:
        cf = continued_fraction(source, args.terms, _policy(args))
    except PrecisionExhausted as exc:
        body.update(precision=args.precision_cap, partial_quotients=[], convergents=[], message=str(exc))
        code = EXIT_FAILURE
    else:
        cf.check()
        body.update(
            precision=cf.precision,
            partial_quotients=[str(a) for a in cf.partial_quotients],
            convergents=[{"index": i, "p": str(p), "q": str(q)} for i, (p, q) in enumerate(cf.convergents)],
        )
        code = EXIT_OK
    return code, ReportDocument("cf", _inputs(args), body, {"cf": round(time.perf_counter() - start, 6)})


def _reduce_at(spec: InstanceSpec, convergent: int | None, precision: int) -> ReductionResult:
    inst = spec.at(precision)
    try:
        cf = continued_fraction_beyond(inst.tau, 6 * spec.M, extra=4)
    except PrecisionExhausted as exc:
        return ReductionResult(ReductionStatus.PRECISION_EXHAUSTED, message=str(exc))
    try:
        return dp_reduce(inst, cf, convergent)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_reduce(args) -> tuple[int, ReportDocument]:
    start = time.perf_counter()
    try:
        spec = InstanceSpec.load(args.instance)
    except InstanceError as exc:
        raise UsageError(f"{args.instance}: {exc}") from None
    convergent = args.convergent if args.convergent is not None else spec.convergent
    result, used = None, args.precision
    for prec in _policy(args).levels():
        used = prec
        try:
            result = _reduce_at(spec, convergent, prec)
        except InstanceError as exc:
            raise UsageError(f"{args.instance}: {exc}") from None
        except CertificationError as exc:
            result = ReductionResult(ReductionStatus.PRECISION_EXHAUSTED, message=str(exc))
        if result.status is not ReductionStatus.PRECISION_EXHAUSTED:
            break
    body = {"instance": dict(spec.fields), "M": str(spec.M), "precision": used,
            "result": reduction_result_dict(result)}
    return ((EXIT_OK if result.ok else EXIT_FAILURE),
            ReportDocument("reduce", _inputs(args), body, {"reduce": round(time.perf_counter() - start, 6)}))


def cmd_constants(args) -> tuple[int, ReportDocument]:
    start = time.perf_counter()
    c = build_constants(args.precision)
    table = constants_summary(c)
    table.update(rho=c.rho, tau=c.tau, sqrt5=c.sqrt5)
    body = {"precision": args.precision, "constants": jsonable(table)}
    return EXIT_OK, ReportDocument("constants", _inputs(args), body,
                                   {"constants": round(time.perf_counter() - start, 6)})


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser(precision: int) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="baker-kit",
                                     description="Certified Baker-method pipeline for N_m = F_n F_k.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, cap: bool = True) -> None:
        p.add_argument("--precision", type=_positive_int, default=precision,
                       help=f"starting precision in bits (default {precision})")
        if cap:
            p.add_argument("--precision-cap", type=_positive_int, default=max(DEFAULT_CAP, precision),
                           help="largest precision tried before giving up")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--out", type=Path, help="write the report here instead of stdout")

    p = sub.add_parser("prove", help="run the whole proof and emit a certificate")
    common(p)
    p.add_argument("--no-snap", action="store_true",
                   help="feed every stage its own computed bound instead of the reference value")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("search", help="exhaustive search over a box")
    p.add_argument("--m-max", type=_positive_int, required=True)
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.add_argument("--k-max", type=_positive_int, required=True)
    p.add_argument("--squares-only", action="store_true")
    p.add_argument("--both-orders", action="store_true")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("cf", help="certified continued fraction expansion")
    common(p)
    p.add_argument("--value", required=True, help="'tau' or a value-spec file")
    p.add_argument("--terms", type=_positive_int, required=True)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("reduce", help="Baker-Davenport reduction on an instance file")
    common(p)
    p.add_argument("instance", help="instance file")
    p.add_argument("--convergent", type=int, help="use only this convergent index")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("constants", help="print the certified constants table")
    common(p, cap=False)
    p.set_defaults(func=cmd_constants)
    return parser


def _emit(doc: ReportDocument, fmt: str, out: Path | None) -> None:
    text = doc.to_json() if fmt == "json" else render_text(doc)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser(default_precision())
    except UsageError as exc:
        print(f"baker-kit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, doc = args.func(args)
    except UsageError as exc:
        print(f"baker-kit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _emit(doc, args.format, args.out)
    except OSError as exc:
        print(f"baker-kit: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
