"""Command-line interface: ``tailratio <command> [options]``.

Exit codes: 0 success, 2 malformed input or arguments, 3 sample size not
of the form ``(s+1)k - 1`` (without ``--allow-truncate``), 4 output path not
writable, 5 degenerate statistic (tied order statistics).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import montecarlo as mc
from .distributions import SeedSpec, pareto
from .errors import DegenerateRatio, IncompatibleSampleSize
from .estimators import confidence_interval, q_estimator
from .order_stats import OrderedSample, truncate_to_design

EXIT_INPUT = 2
EXIT_SIZE = 3
EXIT_OUTPUT = 4
EXIT_DEGENERATE = 5


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}")


def _str_list(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def read_observations(path) -> list:
    """Read one positive number per line; an optional non-numeric first line
    is taken as a CSV header."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_INPUT)
    values = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        if "," in text:
            raise CliError(f"{path}:{lineno}: expected a single column, got {text!r}",
                           EXIT_INPUT)
        try:
            v = float(text)
        except ValueError:
            if lineno == 1:
                continue  # header
            raise CliError(f"{path}:{lineno}: not a number: {text!r}", EXIT_INPUT)
        if not math.isfinite(v):
            raise CliError(f"{path}:{lineno}: non-finite value {text!r}", EXIT_INPUT)
        if v <= 0:
            raise CliError(f"{path}:{lineno}: value must be positive, got {text!r}",
                           EXIT_INPUT)
        values.append(v)
    if not values:
        raise CliError(f"{path}: no observations", EXIT_INPUT)
    return values


def _emit(rows, fmt, out):
    if fmt == "json":
        text = json.dumps(rows, indent=2, allow_nan=False, default=str,
                          sort_keys=False) + "\n"
    else:
        text = mc.write_csv(rows)
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc.strerror}", EXIT_OUTPUT)


def _json_safe(rows):
    return [{k: (None if isinstance(v, float) and not math.isfinite(v) else v)
             for k, v in row.items()} for row in rows]


def cmd_estimate(args):
    raw = read_observations(args.input)
    rows = []
    for s in args.s:
        if s < 2:
            raise CliError(f"--s values must be >= 2, got {s}", EXIT_INPUT)
        discarded = 0
        if (len(raw) + 1) % (s + 1) == 0:
            sample = OrderedSample(raw)
        elif args.allow_truncate:
            try:
                sample, discarded = truncate_to_design(raw, s, SeedSpec(args.seed, s))
            except IncompatibleSampleSize as exc:
                raise CliError(str(exc), EXIT_SIZE)
        else:
            raise CliError(
                f"n = {len(raw)} is not of the form (s+1)k - 1 for s = {s}; "
                "use --allow-truncate", EXIT_SIZE)
        try:
            est = q_estimator(sample, s=s)
            ci = confidence_interval(sample, est.k, s, args.level)
        except DegenerateRatio as exc:
            raise CliError(f"s = {s}: {exc}", EXIT_DEGENERATE)
        rows.append({
            "s": s,
            "n_input": len(raw),
            "n_used": sample.n,
            "discarded": discarded,
            "k": est.k,
            "log_ratio": est.log_ratio,
            "q": est.q,
            "q_star": est.q_star,
            "alpha_hat": est.alpha_hat,
            "level": args.level,
            "ci_lower": ci.lower,
            "ci_upper": ci.upper,
        })
    _emit(rows, args.format, args.out)


def cmd_simulate(args):
    plan = mc.ExperimentPlan(
        model=pareto(args.alpha, args.delta),
        s_list=tuple(args.s),
        k_max=args.k_max,
        replicates=args.reps,
        level=args.level,
        master_seed=args.seed,
        estimators=tuple(args.estimators),
        threads=args.threads,
    )
    rows = [c.as_dict() for c in mc.run_plan(plan).cells]
    _emit(_json_safe(rows) if args.format == "json" else rows, args.format, args.out)


def cmd_coverage(args):
    plan = mc.ExperimentPlan(
        model=pareto(args.alpha, 1.0),
        s_list=(args.s,),
        k_max=args.k,
        replicates=args.reps,
        level=args.level,
        master_seed=args.seed,
        threads=args.threads,
    )
    cov = mc.coverage_experiment(plan)
    row = {"alpha": args.alpha, "s": args.s, "k": args.k, "n": plan.sample_size(args.s),
           "replicates": args.reps, "level": args.level, "coverage": cov}
    _emit(_json_safe([row]) if args.format == "json" else [row], args.format, args.out)


def cmd_compare(args):
    rows = mc.compare(args.alpha, args.n, args.reps, tuple(args.estimators),
                      tuple(args.s), args.seed, args.threads)
    _emit(_json_safe(rows) if args.format == "json" else rows, args.format, args.out)


def figure_filename(alpha: float) -> str:
    return f"figure_alpha_{alpha:g}.csv"


def cmd_figures(args):
    if args.defaults:
        args.alpha, args.s = list(mc.FIGURE_ALPHAS), list(mc.FIGURE_S)
        args.k_max, args.reps, args.level = 500, 100, 0.95
    try:
        os.makedirs(args.out_dir, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create {args.out_dir}: {exc.strerror}", EXIT_OUTPUT)
    if not os.access(args.out_dir, os.W_OK):
        raise CliError(f"{args.out_dir} is not writable", EXIT_OUTPUT)
    grid = mc.figure_grid(args.alpha, args.s, args.k_max, args.reps, args.seed,
                          args.level, args.threads)
    for alpha in args.alpha:
        rows = [
            {"s": r.s, "k": r.k, "avg_inv_qstar": r.avg_inv_qstar,
             "ci_lower": r.ci_lower, "ci_upper": r.ci_upper}
            for r in grid if r.alpha == float(alpha)
        ]
        path = os.path.join(args.out_dir, figure_filename(alpha))
        _emit(rows, "csv", path)
        print(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailratio",
        description="Tail-index estimation from log-ratios of central order statistics.",
    )
    parser.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default: ${mc.THREADS_ENV} or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, fmt=True):
        if seed:
            p.add_argument("--seed", type=int, default=mc.DEFAULT_SEED,
                           help=f"master seed (default {mc.DEFAULT_SEED})")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")
            p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("estimate", help="estimate alpha from a data file")
    p.add_argument("--input", required=True)
    p.add_argument("--s", type=_int_list, required=True, help="e.g. 2 or 2,3,5")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--allow-truncate", action="store_true",
                   help="randomly discard observations to reach a valid size")
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="Monte Carlo grid on Pareto samples")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--s", type=_int_list, default=[2])
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--estimators", type=_str_list, default=["Q", "QStar"])
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("coverage", help="empirical coverage of the interval for alpha")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--level", type=float, default=0.95)
    common(p)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("compare", help="RMSE comparison with baseline estimators")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--estimators", type=_str_list,
                   default=["QStar", "Hill", "THill", "Pickands", "Moment"])
    p.add_argument("--s", type=_int_list, default=[2, 3, 4, 5])
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("figures", help="write the per-alpha figure tables")
    p.add_argument("--defaults", action="store_true",
                   help="alpha 0.3,0.5,1,1.5; s 2..5; k <= 500; 100 replicates")
    p.add_argument("--alpha", type=_float_list, default=list(mc.FIGURE_ALPHAS))
    p.add_argument("--s", type=_int_list, default=list(mc.FIGURE_S))
    p.add_argument("--k-max", type=int, default=500)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--out-dir", default="figures")
    common(p, fmt=False)
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"tailratio: error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"tailratio: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
