"""Command line entry point: ``python -m moeadlla <command> [options]``.

Exit status is 0 on success, 1 for configuration problems and 2 for
file system errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import harness
from .errors import ConfigurationError, UnsupportedProblemError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2

_COMMANDS = {
    "run": harness.cmd_run,
    "sweep": harness.cmd_sweep,
    "table1": harness.cmd_table1,
    "error-curve": harness.cmd_error_curve,
}


def _experiment_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat 'key = value' file; command-line options win over it")
    p.add_argument("--problem")
    p.add_argument("--gamma", help="one value, or a comma-separated list")
    p.add_argument("--seed", type=int, help="seed of the first replicate")
    p.add_argument("--generations", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--out", help=f"output directory (default: ${harness.OUT_ENV} or ./{harness.DEFAULT_OUT})")
    p.add_argument("--jobs", type=int, help="parallel worker processes")
    p.add_argument("--no-baseline", action="store_true", help="skip the MOEA/D-DE baseline in 'run'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moeadlla", description="MOEA/D with local linear approximation")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "run": "LLA runs (and budget-matched baseline) for each gamma and replicate",
        "sweep": "R-metric statistics across a gamma list",
        "table1": "baseline vs LLA population vs LLA predictions on the benchmark suite",
        "error-curve": "per-generation distance to the true optima",
    }
    for name, text in helps.items():
        _experiment_options(sub.add_parser(name, help=text))
    m = sub.add_parser("metrics", help="recompute report rows from a finished run directory")
    m.add_argument("run_dir")
    m.add_argument("--out", help="target CSV (default: RUN_DIR/metrics.csv)")
    m.add_argument("--sigma2", type=float, default=0.02)
    m.add_argument("--delta-reading", choices=("std", "variance"), default="std")
    return parser


def _config_from_args(args) -> harness.ExperimentConfig:
    overrides = {
        "problem": args.problem,
        "gamma": args.gamma,
        "seed": args.seed,
        "generations": args.generations,
        "replicates": args.replicates,
        "out": args.out,
        "jobs": args.jobs,
    }
    if args.no_baseline:
        overrides["baseline"] = False
    file_entries = harness.parse_config_text(open(args.config).read()) if args.config else None
    return harness.make_config(file_entries, overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "metrics":
            path = harness.cmd_metrics(args.run_dir, args.out, args.delta_reading, args.sigma2)
        else:
            cfg = _config_from_args(args)
            path = _COMMANDS[args.command](cfg)
    except (ConfigurationError, UnsupportedProblemError) as exc:
        key = getattr(exc, "key", None)
        print(f"configuration error{f' [{key}]' if key else ''}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
