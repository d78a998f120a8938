"""
Command-line interface for chi2cav: configuration loading, table output and the
subcommands behind the `chi2cav` console script.
"""

from .commands import run_command, worker_count
from .config import RunConfig, load_config, parse_config
from .verify import VerifyReport, run_checks

__all__ = [
    "RunConfig",
    "VerifyReport",
    "load_config",
    "main",
    "parse_config",
    "run_checks",
    "run_command",
    "worker_count",
]


def main(argv=None) -> int:
    from .__main__ import main as _main

    return _main(argv)
