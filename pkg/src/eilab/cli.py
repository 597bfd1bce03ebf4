"""Command line entry point: simulate, estimate, asymvar, mc-study.

Exit codes: 0 success, 1 usage or invalid input, 2 numerical failure,
3 insufficient data.  Numbers are printed with 9 significant digits.
"""

import argparse
import os
import sys

from . import asymvar, mcstudy
from .competitors import COMPETITORS, threshold_quantile
from .estimators import EstimatorSpec, Method, estimate_pipeline, parse_spec
from .exceptions import (
    ConvergenceError,
    DegenerateSampleError,
    DomainError,
    InsufficientDataError,
)
from .sim import ModelKind, ModelSpec, read_series, simulate, write_series

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_DATA = 0, 1, 2, 3
FULL_REPLICATIONS = 3000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def fmt(x):
    return format(float(x), ".9g")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {v}")
    return v


def _estimator_name(text):
    t = text.strip().lower()
    if t in COMPETITORS:
        return t
    try:
        parse_spec(t)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return t


def build_parser():
    parser = _Parser(prog="eilab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate a benchmark series to stdout")
    p.add_argument("--model", required=True, choices=[k.value for k in ModelKind])
    p.add_argument("--param", required=True, type=float)
    p.add_argument("--n", required=True, type=_positive_int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("estimate", help="estimate the extremal index of a series")
    p.add_argument("input", nargs="?", default="-", help="file with one value per line; '-' for stdin")
    p.add_argument("--estimator", required=True, type=_estimator_name,
                   help="cfg, mad, pml, root:<p>, intervals or suveges")
    p.add_argument("--scheme", choices=["sliding", "disjoint"], default="sliding")
    p.add_argument("--transform", choices=["z", "y"], default="z")
    p.add_argument("--block-size", required=True, type=_positive_int)
    p.add_argument("--bias-reduced", action="store_true")
    p.add_argument("--clip", action="store_true", help="truncate the estimate at 1")
    p.add_argument("--threshold", type=float,
                   help="threshold for intervals/suveges (default: 1 - 1/b quantile)")

    p = sub.add_parser("asymvar", help="asymptotic variance of a blocks estimator")
    p.add_argument("--model", choices=["iid", "armax"], default="iid")
    p.add_argument("--alpha", type=float, default=0.0, help="ARMAX parameter")
    p.add_argument("--theta", type=float, default=1.0, help="theta for the iid model")
    p.add_argument("--estimator", required=True, help="cfg, mad, pml or root:<p>")
    p.add_argument("--scheme", choices=["sliding", "disjoint"], default="disjoint")
    p.add_argument("--p", type=float, help="power for root (overrides root:<p>)")
    p.add_argument("--all", action="store_true",
                   help="print variance, variance/theta^2 and the sliding gap")

    p = sub.add_parser("mc-study", help="run a Monte-Carlo study from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV path (default stdout); metadata goes to <out>.meta.json")
    p.add_argument("--out-dir", help="also write one CSV per model here")
    p.add_argument("--seed", type=int, help="override the config's master seed")
    p.add_argument("--replications", type=_positive_int, help="override N")
    p.add_argument("--full", action="store_true", help=f"use N={FULL_REPLICATIONS}")
    p.add_argument("--parallelism", type=_positive_int,
                   help="worker processes (else EI_LAB_THREADS, else the config)")
    return parser


def _cmd_simulate(args, out):
    ts = simulate(ModelSpec(args.model, args.param), args.n, args.seed)
    if args.out:
        with open(args.out, "w") as fh:
            write_series(ts, fh)
    else:
        write_series(ts, out)


def _cmd_estimate(args, out):
    if args.input == "-":
        ts = read_series(sys.stdin)
    else:
        with open(args.input) as fh:
            ts = read_series(fh)
    if args.block_size > ts.n:
        raise InsufficientDataError(
            f"block size {args.block_size} exceeds series length {ts.n}")
    if args.estimator in COMPETITORS:
        u = args.threshold
        if u is None:
            u = threshold_quantile(ts, args.block_size)
        theta = COMPETITORS[args.estimator](ts, u)
    else:
        spec = parse_spec(args.estimator, clip=args.clip)
        theta = estimate_pipeline(ts.values, args.scheme, args.transform,
                                  args.bias_reduced, spec, block_size=args.block_size)
    out.write(fmt(theta) + "\n")


def _cmd_asymvar(args, out):
    if args.estimator.strip().lower() == "root":
        if args.p is None:
            raise UsageError("root needs a power: --estimator root:<p> or --p")
        spec = EstimatorSpec(Method.ROOT, args.p)
    else:
        spec = parse_spec(args.estimator)
    p = spec.p
    if args.p is not None:
        if spec.kind is not Method.ROOT:
            raise UsageError("--p only applies to root estimators")
        p = args.p
    if args.model == "iid":
        model = asymvar.iid_model(args.theta)
    else:
        model = asymvar.armax_model(args.alpha)
    var = asymvar.asymptotic_variance(spec.kind, args.scheme, model, p)
    if not args.all:
        out.write(fmt(var) + "\n")
        return
    th = model.theta
    gap = asymvar.sliding_gap(spec.kind, th, p)
    out.write(f"variance={fmt(var)}\n")
    out.write(f"variance_over_theta2={fmt(var / th ** 2)}\n")
    out.write(f"sliding_gap={fmt(gap)}\n")


def _cmd_mc_study(args, out):
    with open(args.config) as fh:
        cfg = mcstudy.parse_config(fh.read())
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.full:
        cfg.replications = FULL_REPLICATIONS
    if args.replications is not None:
        cfg.replications = args.replications
    env = os.environ.get("EI_LAB_THREADS")
    if args.parallelism is not None:
        cfg.parallelism = args.parallelism
    elif env:
        try:
            cfg.parallelism = _positive_int(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"EI_LAB_THREADS: {exc}") from None
    cfg.__post_init__()
    result = mcstudy.run_study(cfg)
    mcstudy.write_outputs(result, out_path=args.out, out_dir=args.out_dir)
    if not args.out:
        result.to_csv(out)


_COMMANDS = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "asymvar": _cmd_asymvar,
    "mc-study": _cmd_mc_study,
}


def main(argv=None, stdout=None, stderr=None):
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except InsufficientDataError as exc:
        print(f"error: insufficient data: {exc}", file=err)
        return EXIT_DATA
    except (ConvergenceError, DegenerateSampleError, ArithmeticError) as exc:
        print(f"error: numerical failure: {exc}", file=err)
        return EXIT_NUMERIC
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
