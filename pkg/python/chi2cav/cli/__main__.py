"""
CLI entry point for chi2cav.

Usage:
    python -m chi2cav.cli COMMAND --config CONFIG [options]

Example:
    chi2cav threshold --config ref1.json
    chi2cav clamp-curve --config ref1.json --pmin 0 --pmax 2e-4 --steps 41
    chi2cav spectrum --config ref1.json --model eq6 --n 3 --omega-max 20 --points 401
"""

import argparse
import logging
import sys
from typing import List, Optional

from ..errors import (
    AmbiguousBranchError,
    ConfigError,
    DomainError,
    NonConvergenceError,
    UnsupportedRegimeError,
)
from .commands import EXIT_CONFIG, EXIT_NONCONVERGENCE, run_command
from .config import load_config

logger = logging.getLogger("chi2cav")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument(
        "--output", help="Write the table to this file (default: stdout)"
    )
    common.add_argument(
        "--format", choices=["csv", "json"], help="Table format (default: csv)"
    )
    common.add_argument(
        "--threads",
        type=int,
        help="Worker threads for sweeps (default: CHI2CAV_THREADS or CPU count)",
    )
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument(
        "-q", "--quiet", action="store_true", help="Warnings and errors only"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="chi2cav",
        description=(
            "Competing second-harmonic generation and parametric oscillation "
            "in an optical cavity"
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    threshold = commands.add_parser(
        "threshold", parents=[common], help="Threshold, clamp and efficiency"
    )
    mode = threshold.add_mutually_exclusive_group()
    mode.add_argument(
        "--detuned", action="store_true", help="Effective-decay substitution rule"
    )
    mode.add_argument(
        "--numeric",
        action="store_true",
        help="Numeric bifurcation of the trivial branch",
    )

    steady = commands.add_parser(
        "steady", parents=[common], help="Steady state at one pump power"
    )
    steady.add_argument(
        "--power",
        type=float,
        help="Pump power in W (default: pump_power from config)",
    )
    steady.add_argument(
        "--analytic",
        action="store_true",
        help="Closed-form branch (zero detuning only)",
    )

    curve = commands.add_parser(
        "clamp-curve",
        parents=[common],
        help="Second-harmonic power versus pump power",
    )
    curve.add_argument("--pmin", type=float, help="First pump power (W)")
    curve.add_argument("--pmax", type=float, help="Last pump power (W)")
    curve.add_argument("--steps", type=int, help="Number of points")
    curve.add_argument(
        "--spacing", choices=["linear", "log"], help="Grid spacing (default: linear)"
    )
    curve.add_argument(
        "--no-competition",
        action="store_true",
        help="Doubler only, parametric process suppressed",
    )

    spectrum = commands.add_parser(
        "spectrum", parents=[common], help="Second-harmonic squeezing spectrum"
    )
    spectrum.add_argument(
        "--model", choices=["eq4", "eq5", "eq6"], help="Spectrum model"
    )
    spectrum.add_argument(
        "--n", type=float, help="Pump power in units of the threshold"
    )
    spectrum.add_argument(
        "--omega-max", type=float, help="Largest omega in units of gamma1"
    )
    spectrum.add_argument("--points", type=int, help="Number of frequency points")

    cascade = commands.add_parser(
        "cascade", parents=[common], help="Cascaded line positions"
    )
    cascade.add_argument("--delta", type=float, help="Signal/idler offset from nu (Hz)")
    cascade.add_argument("--order", type=int, help="Cascade order (default: 2)")

    verify = commands.add_parser(
        "verify", parents=[common], help="Run the self-verification suite"
    )
    verify.add_argument("--seed", type=int, help="Seed for the randomized checks")
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        run_config = load_config(args.config)
        return run_command(args.command, run_config, args)
    except (ConfigError, DomainError, UnsupportedRegimeError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except (NonConvergenceError, AmbiguousBranchError) as exc:
        logger.error("did not converge: %s", exc)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
