"""Command-line surface: JSON on stdout, diagnostics on stderr.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Exact
rationals are serialized as "num/den" strings, never floats; high-precision
values are decimal strings with their digit count alongside.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath

from .class_numbers import hurwitz_kronecker
from .constants import (
    pair_constant,
    same_trace_constant,
    single_curve_constant,
    universal_product,
)
from .curves import Curve, pair_count
from .gekeler import product_check
from .local import local_limit, s_closed_distinct, s_closed_same, s_direct
from .matcount import PrimePower
from .model_sim import ModelConfig, growth_check, sample_run
from .prime_stats import CHECKPOINTS_DEFAULT, class_sum, slope_fit
from .verify import SUITES, verify_suites


def _frac(x):
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _parse_curve(text):
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"curve must be 'a,b', got {text!r}") from exc
    return Curve(a, b)


def _checkpoint_list(text):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad checkpoint list {text!r}") from exc


def cmd_local_factor(args):
    pp = PrimePower(args.ell, args.k)
    norm = pp.ell ** (5 * pp.k - 5)
    results = {}
    if args.method in ("direct", "both"):
        results["direct"] = Fraction(s_direct(args.t1, args.t2, pp, workers=args.workers), norm)
    if args.method in ("closed", "both"):
        if args.t1 == args.t2 or args.t1 == -args.t2:
            results["closed"] = s_closed_same(abs(args.t1), args.ell, args.k)
        else:
            closed = s_closed_distinct(args.t1, args.t2, args.ell, args.k)
            if closed is None:
                raise ValueError(
                    f"no closed form at depth k={args.k} for ({args.t1},{args.t2},{args.ell})"
                )
            results["closed"] = closed[0]
    if len(results) == 2 and results["direct"] != results["closed"]:
        print(f"warning: direct {results['direct']} != closed {results['closed']}", file=sys.stderr)
        return 1
    s_norm = next(iter(results.values()))
    lf = local_limit(args.t1, args.t2, args.ell)
    _emit(
        {
            "ell": args.ell,
            "k": args.k,
            "t1": args.t1,
            "t2": args.t2,
            "S": int(s_norm * norm),
            "s_normalized": _frac(s_norm),
            "method": args.method,
            "stabilized_at": lf.stabilized_at,
            "c_ell": _frac(lf.c_ell),
            "provenance": lf.provenance,
        }
    )
    return 0


_REFERENCES = {("pair", 0, 0): "35/96", ("universal",): "0.08789878383"}


def cmd_constant(args):
    if args.kind == "pair":
        est = pair_constant(args.t1, args.t2, args.lmax, digits=args.digits)
        ref = _REFERENCES.get(("pair", abs(args.t1), abs(args.t2)))
    elif args.kind == "same-trace":
        est = same_trace_constant(args.t1, args.lmax, digits=args.digits)
        ref = _REFERENCES.get(("pair", abs(args.t1), abs(args.t1)))
    elif args.kind == "universal":
        est = universal_product(args.lmax, digits=args.digits)
        ref = _REFERENCES[("universal",)]
    else:
        est = single_curve_constant(args.t1, args.lmax, digits=args.digits)
        ref = None
    out = {
        "kind": args.kind,
        "t1": args.t1,
        "t2": args.t2 if args.kind == "pair" else None,
        "lmax": args.lmax,
        "value": mpmath.nstr(est.value, args.digits),
        "digits": est.digits,
        "truncation_prime": est.truncation_prime,
        "tail_conservative": est.tail_conservative,
        "tail_empirical": est.tail_empirical,
        "conjectural_factors": est.conjectural_factors,
    }
    if ref is not None:
        out["reference"] = ref
    _emit(out)
    return 0


def cmd_class_number(args):
    cd = hurwitz_kronecker(args.d)
    _emit(
        {
            "D": args.d,
            "D0": cd.split.D0,
            "f": cd.split.f,
            "h": cd.h,
            "w": cd.w,
            "hurwitz_kronecker": cd.hk,
            "weighted": _frac(cd.hw),
        }
    )
    return 0


def cmd_gekeler(args):
    r = product_check(args.t, args.p, args.lmax)
    _emit(
        {
            "t": args.t,
            "p": args.p,
            "lhs": _frac(r["lhs"]),
            "rhs_decimal": repr(r["rhs"]),
            "rel_error": r["rel_error"],
            "lmax": r["lmax"],
        }
    )
    return 0


def cmd_average(args):
    series = class_sum(
        args.t1, args.t2, args.x, checkpoints=args.checkpoints,
        cache=args.cache, workers=args.workers,
    )
    fit = slope_fit(series)
    reference = float(pair_constant(args.t1, args.t2, args.reference_lmax).value)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("x,loglog_x,partial_sum\n")
            for x, s, llx in series.checkpoints:
                fh.write(f"{x},{llx!r},{s!r}\n")
        print(f"wrote {args.csv}", file=sys.stderr)
    _emit(
        {
            "t1": args.t1,
            "t2": args.t2,
            "x": args.x,
            "checkpoints": [
                {"x": x, "loglog_x": llx, "partial_sum": s}
                for x, s, llx in series.checkpoints
            ],
            "c_hat": fit.c_hat,
            "intercept": fit.intercept,
            "reference_constant": reference,
            "ratio": fit.c_hat / reference,
            "cache_stats": series.cache_stats,
        }
    )
    return 0


def cmd_curves(args):
    result = pair_count(
        args.e1, args.e2, args.t1, args.t2, args.x,
        list_primes=args.list_primes,
        prediction_lmax=args.predict_lmax,
    )
    _emit(result)
    return 0


def cmd_simulate(args):
    config = ModelConfig(args.m, args.n, args.seed, args.t1, args.t2)
    run = sample_run(config)
    ladder = [c for c in (1000, 10_000, 100_000, 1_000_000) if c <= args.n]
    if not ladder or ladder[-1] != args.n:
        ladder.append(args.n)
    rows = []
    for n_cut in ladder:
        g = growth_check(run, config, upto=n_cut)
        rows.append({"n": n_cut, "hits": g.hits, "predicted": g.predicted, "ratio": g.ratio})
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("n,hits,predicted,ratio\n")
            for r in rows:
                fh.write(f"{r['n']},{r['hits']},{r['predicted']!r},{r['ratio']!r}\n")
        print(f"wrote {args.csv}", file=sys.stderr)
    g = growth_check(run, config)
    _emit(
        {
            "m": args.m,
            "n_max": args.n,
            "seed": args.seed,
            "t1": args.t1,
            "t2": args.t2,
            "sampled_primes": int(run.primes.shape[0]),
            "hits": g.hits,
            "predicted": g.predicted,
            "ratio": g.ratio,
            "class_counts": run.class_counts.tolist(),
            "checkpoints": rows,
        }
    )
    return 0


def cmd_verify(args):
    names = args.suite if args.suite else None
    report = verify_suites(names, full=args.full, workers=args.workers)
    for check in report.checks:
        tag = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[check.status]
        extra = " [conjectural]" if check.conjectural else ""
        print(f"{tag} {check.id}{extra} ({check.elapsed:.2f}s)", file=sys.stderr)
    _emit(report.to_dict())
    return 0 if report.overall == "pass" else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tracepair",
        description="Exact-arithmetic toolkit for Frobenius trace-pair statistics",
    )
    parser.add_argument(
        "--workers", type=int, default=os.cpu_count() or 1,
        help="worker threads for partitioned sums (results are identical at any count)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("local-factor", help="local sum S and its Euler factor at one prime power")
    p.add_argument("--t1", type=int, required=True)
    p.add_argument("--t2", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("direct", "closed", "both"), default="direct")
    p.set_defaults(fn=cmd_local_factor)

    p = sub.add_parser("constant", help="truncated Euler-product constants")
    p.add_argument("--t1", type=int, default=0)
    p.add_argument("--t2", type=int, default=0)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--kind", choices=("pair", "same-trace", "universal", "single"), default="pair")
    p.set_defaults(fn=cmd_constant)

    p = sub.add_parser("class-number", help="class number and weighted class-number sums")
    p.add_argument("--d", type=int, required=True, help="negative discriminant, 0 or 1 mod 4")
    p.set_defaults(fn=cmd_class_number)

    p = sub.add_parser("gekeler", help="product formula check against H(t^2-4p)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--lmax", type=int, default=100_000)
    p.set_defaults(fn=cmd_gekeler)

    p = sub.add_parser("average", help="weighted class-number prime sums and loglog slope")
    p.add_argument("--t1", type=int, required=True)
    p.add_argument("--t2", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--checkpoints", type=_checkpoint_list, default=CHECKPOINTS_DEFAULT)
    p.add_argument("--cache", default=os.environ.get("TRACEPAIR_CACHE"))
    p.add_argument("--csv", help="write the checkpoint series as CSV to this path")
    p.add_argument("--reference-lmax", type=int, default=2000)
    p.set_defaults(fn=cmd_average)

    p = sub.add_parser("curves", help="trace-pair prime counting for two concrete curves")
    p.add_argument("--e1", type=_parse_curve, required=True, metavar="a,b")
    p.add_argument("--e2", type=_parse_curve, required=True, metavar="a,b")
    p.add_argument("--t1", type=int, required=True)
    p.add_argument("--t2", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--list-primes", action="store_true")
    p.add_argument("--predict-lmax", type=int, default=None,
                   help="attach the generic-image prediction using this truncation")
    p.set_defaults(fn=cmd_curves)

    p = sub.add_parser("simulate", help="seeded Monte Carlo trace-pair model")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--t1", type=int, required=True)
    p.add_argument("--t2", type=int, required=True)
    p.add_argument("--csv", help="write per-checkpoint hit counts as CSV to this path")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run cross-verification suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES),
                   help="suite to run (repeatable); default: all")
    p.add_argument("--full", action="store_true",
                   help="run the full distinct-trace grid (1..100, primes to 19)")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
