"""Command-line entry point: ``wernerqst {sweep,correlate,simulate,reconstruct}``.

Exit codes: 0 success, 1 usage error, 2 I/O or input-format error,
3 estimator did not converge (``reconstruct`` only).
"""
import argparse
import logging
import sys
from pathlib import Path

from . import experiment
from .errors import ParseError, TomographyError
from .reconstruct import EstimatorConfig

log = logging.getLogger("wernerqst")

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NOT_CONVERGED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _u64(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _add_common(p, default_out):
    p.add_argument("--seed", type=_u64, default=0, help="master seed (u64)")
    p.add_argument("--out", type=Path, default=Path(default_out), help="output path")


def _add_estimator(p):
    d = EstimatorConfig()
    p.add_argument("--restarts", type=int, default=d.restarts)
    p.add_argument("--max-evals", type=int, default=d.max_evaluations,
                   help="Nelder-Mead evaluation budget per restart")
    p.add_argument("--floor", type=float, default=d.floor,
                   help="lower bound on the chi-squared denominator, in counts")


def _estimator_config(args):
    return EstimatorConfig(restarts=args.restarts, max_evaluations=args.max_evals, floor=args.floor)


def build_parser():
    parser = _Parser(prog="wernerqst", description="Werner-state SIC-POVM tomography simulations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sweep", help="fidelity/purity/concurrence over the Werner family")
    _add_common(p, "sweep.csv")
    p.add_argument("--eta-start", type=float, default=0.0)
    p.add_argument("--eta-end", type=float, default=1.0)
    p.add_argument("--eta-step", type=float, default=0.02)
    p.add_argument("--pairs", type=_float_list, default=[10.0, 100.0, 1000.0],
                   help="comma-separated mean pair numbers N")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--paper-mode", action="store_true", help="single trial per cell")
    p.add_argument("--summary", type=Path, default=None,
                   help="also write per-cell mean/min/max to this CSV")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_estimator(p)

    p = sub.add_parser("correlate", help="coincidence scan with arm 1 fixed at H")
    _add_common(p, "correlation.csv")
    p.add_argument("--eta", type=_float_list, default=[0.5, 1.0],
                   help="comma-separated Werner parameters; one file per value")
    p.add_argument("--pairs", type=float, default=1000.0)
    p.add_argument("--angle-step", type=float, default=5.0, help="degrees")

    p = sub.add_parser("simulate", help="write one noisy counts file")
    _add_common(p, "counts.csv")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--pairs", type=float, default=1000.0)
    p.add_argument("--round", action="store_true", help="round counts to integers")

    p = sub.add_parser("reconstruct", help="estimate a state from a counts file")
    p.add_argument("counts", type=Path)
    p.add_argument("--out", type=Path, default=Path("state.json"))
    p.add_argument("--reference-eta", type=float, default=None)
    p.add_argument("--seed", type=_u64, default=0, help="seed for restart perturbations")
    _add_estimator(p)
    return parser


def correlation_paths(out, etas):
    if len(etas) == 1:
        return [out]
    return [out.with_name(f"{out.stem}_eta{eta:g}{out.suffix}") for eta in etas]


def _run(args):
    if args.command == "sweep":
        trials = 1 if args.paper_mode else args.trials
        config = experiment.SweepConfig(
            eta_grid=experiment.eta_grid(args.eta_start, args.eta_end, args.eta_step),
            mean_pairs_list=tuple(args.pairs),
            trials=trials,
            seed=args.seed,
            estimator=_estimator_config(args),
            jobs=args.jobs,
        )
        records = experiment.run_sweep(config)
        experiment.write_sweep_csv(records, args.out)
        log.info("wrote %d records to %s", len(records), args.out)
        if args.summary is not None:
            experiment.write_summary_csv(experiment.summarize(records), args.summary)
        return 0

    if args.command == "correlate":
        for k, (eta, path) in enumerate(zip(args.eta, correlation_paths(args.out, args.eta))):
            experiment.run_correlation(eta, args.pairs, args.angle_step, args.seed, path, stream=k)
            log.info("wrote scan for eta=%g to %s", eta, path)
        return 0

    if args.command == "simulate":
        experiment.run_simulate(args.eta, args.pairs, args.seed, args.out, round_counts=args.round)
        return 0

    if args.command == "reconstruct":
        config = EstimatorConfig(restarts=args.restarts, max_evaluations=args.max_evals,
                                 floor=args.floor, seed=args.seed)
        result, _ = experiment.run_single(args.counts, config, args.reference_eta, args.out)
        if not result.converged:
            log.warning("estimator did not converge within the evaluation budget")
            return EXIT_NOT_CONVERGED
        return 0
    raise UsageError(f"unknown command {args.command!r}")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except ParseError as exc:
        print(f"wernerqst: parse error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"wernerqst: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (TomographyError, ValueError) as exc:
        print(f"wernerqst: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
