"""Command-line surface over the pipeline stages.

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
2 invalid input, 3 probabilistic failure, 4 resource or precision refusal.
Every real number is printed as a truncated decimal string with an
explicit error bound, never as a bare float.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from fractions import Fraction

from . import report as report_mod
from .cycle import walk_cycle
from .errors import (BadEstimateError, InputError, PrecisionError,
                     ResourceCapError, TrialsExhaustedError)
from .field import FieldCtx, make_field, make_order
from .navigator import h_eval
from .pell import solutions
from .qperiod import build_run, qsolve


def _real(fx, digits: int) -> dict:
    val, err = fx.to_decimal(digits)
    return {"value": val, "err": err}


def _field_block(ctx: FieldCtx) -> dict:
    return {"d": ctx.d, "D": ctx.D,
            "d_min": f"{ctx.d_min.numerator}/{ctx.d_min.denominator}",
            "maximal": ctx.maximal}


def _digit_bits(digits: int) -> int:
    return max(96, int(digits * math.log2(10)) + 32)


def _check_digits(digits: int) -> int:
    if digits < 1:
        raise InputError("digit count must be at least 1")
    return digits


def _cmd_regulator(args) -> tuple[FieldCtx, dict, dict | None]:
    ctx = make_field(args.d)
    digits = _check_digits(args.digits)
    if args.method == "cycle":
        cyc = walk_cycle(ctx, _digit_bits(digits))
        result = {"method": "cycle", "digits": digits,
                  "regulator": _real(cyc.regulator, digits),
                  "cycle_length": len(cyc)}
        rep = (report_mod.save_cycle_report(cyc, args.report)
               if args.report else None)
        return ctx, result, rep
    res = qsolve(ctx, digits, max_trials=args.max_trials, N=args.N,
                 q_exponent=args.qexp, seed=args.seed)
    result = {"method": "quantum", "digits": digits,
              "regulator": _real(res.regulator, digits),
              "m": res.m, "N": res.N, "q": res.q, "stats": res.stats}
    rep = (report_mod.save_trials_report(res.stats, args.report)
           if args.report else None)
    return ctx, result, rep


def _cmd_pell(args) -> tuple[FieldCtx, dict, dict | None]:
    try:
        ctx = make_field(args.d)
    except InputError:
        ctx = make_order(args.d)
    sols = solutions(args.d, args.count)
    result = {"x": sols[0].x, "y": sols[0].y,
              "solutions": [{"x": s.x, "y": s.y} for s in sols]}
    return ctx, result, None


def _cmd_cycle(args) -> tuple[FieldCtx, dict, dict | None]:
    ctx = make_field(args.d)
    cyc = walk_cycle(ctx)
    entries = [{"position": e.position, "a": e.ideal.a, "b": e.ideal.b,
                "delta": _real(e.delta, 12)} for e in cyc.entries]
    result = {"length": len(cyc), "regulator": _real(cyc.regulator, 12),
              "entries": entries}
    rep = (report_mod.save_cycle_report(cyc, args.report)
           if args.report else None)
    return ctx, result, rep


def _cmd_h(args) -> tuple[FieldCtx, dict, dict | None]:
    ctx = make_field(args.d)
    digits = _check_digits(args.digits)
    try:
        x = Fraction(args.x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse x = {args.x!r} as a rational") from exc
    hv = h_eval(ctx, x, _digit_bits(digits))
    result = {"x": str(x), "digits": digits,
              "a": hv.ideal.a, "b": hv.ideal.b,
              "delta": _real(hv.delta, digits),
              "gap": _real(hv.gap, digits)}
    return ctx, result, None


def _cmd_qdist(args) -> tuple[FieldCtx, dict, dict | None]:
    ctx = make_field(args.d)
    run = build_run(ctx, args.N, q_exponent=args.qexp)
    good = run.good_js()
    result = {"N": run.N, "q": run.q, "S": _real(run.S, 12),
              "groups": len(run.group_positions)}
    if args.exhaustive:
        mix = run.mixture()
        result["mode"] = "exhaustive"
        result["good"] = [{"j": g.j, "k": g.k,
                           "probability": float(mix[g.j])} for g in good]
        result["good_mass"] = float(sum(mix[g.j] for g in good))
    else:
        rng = random.Random(args.seed)
        g, j = run.sample(rng)
        a, b, gap_units = run.group_keys[g]
        result["mode"] = "sampled"
        result["sample"] = {"j": j, "value": {"a": a, "b": b,
                                              "gap_units": gap_units}}
        result["good"] = [{"j": g.j, "k": g.k} for g in good]
    rep = (report_mod.save_qdist_report(run, args.report)
           if args.report else None)
    return ctx, result, rep


_HANDLERS = {
    "regulator": _cmd_regulator,
    "pell": _cmd_pell,
    "cycle": _cmd_cycle,
    "h": _cmd_h,
    "qdist": _cmd_qdist,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="quadreg",
        description="regulator, Pell, cycle, distance, and Fourier-sampling "
                    "tools for real quadratic fields")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("regulator", help="regulator of Q(sqrt(d))")
    r.add_argument("d", type=int)
    r.add_argument("--digits", type=int, default=12)
    r.add_argument("--method", choices=("cycle", "quantum"), default="cycle")
    r.add_argument("--seed", type=int, default=None,
                   help="RNG seed for quantum sampling")
    r.add_argument("--max-trials", type=int, default=200)
    r.add_argument("--N", type=int, default=None,
                   help="grid override for the quantum method")
    r.add_argument("--qexp", type=int, default=None,
                   help="force the Fourier size q = 2^qexp")
    r.add_argument("--report", metavar="DIR",
                   help="write CSV and PNG artifacts into DIR")

    pe = sub.add_parser("pell", help="fundamental solution of x^2 - d y^2 = 1")
    pe.add_argument("d", type=int)
    pe.add_argument("--count", type=int, default=1,
                    help="number of solutions to list")

    cy = sub.add_parser("cycle", help="principal cycle table")
    cy.add_argument("d", type=int)
    cy.add_argument("--report", metavar="DIR")

    hh = sub.add_parser("h", help="cycle member left of distance x")
    hh.add_argument("d", type=int)
    hh.add_argument("x", help="target distance, decimal or p/q")
    hh.add_argument("digits", type=int)

    qd = sub.add_parser("qdist", help="Fourier outcome distribution")
    qd.add_argument("d", type=int)
    qd.add_argument("N", type=int, help="grid denominator")
    qd.add_argument("--exhaustive", action="store_true",
                    help="full mixture instead of one sampled outcome")
    qd.add_argument("--qexp", type=int, default=None)
    qd.add_argument("--seed", type=int, default=None)
    qd.add_argument("--report", metavar="DIR")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        ctx, result, rep = _HANDLERS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TrialsExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.stats:
            print(json.dumps(exc.stats), file=sys.stderr)
        return 3
    except BadEstimateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ResourceCapError, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    out = {"command": args.command, "field": _field_block(ctx),
           "result": result,
           "elapsed_ms": int((time.monotonic() - t0) * 1000)}
    if rep:
        out["report"] = rep
    print(json.dumps(out, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
