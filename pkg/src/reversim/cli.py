"""Revsim CLI: run time-reversal scenarios from the command line.

Usage:
    revsim run <scenario> [options]   Run a scenario file or bundled scenario
    revsim list                       List bundled scenarios
    revsim show <name>                Print a bundled scenario
    revsim config show|path|set       Manage settings
    revsim --help                     Show help
    revsim --version                  Show version

Examples:
    revsim run spin-bernoulli
    revsim run mz-reversal-n3 --tol 1e-9 --out results
    revsim run my_scenario.json --seed 3 --format json --out results
    REVERSIM_ENUM_CAP=100000 revsim run big.json
"""

from __future__ import annotations

import argparse
import logging
import sys

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )


def main(argv: list[str] | None = None) -> int:
    """Main entry point for revsim CLI.

    Args:
        argv: Command line arguments (defaults to sys.argv[1:])

    Returns:
        Exit code (0 ok, 1 check failure, 2 invalid input)
    """
    from reversim import __version__
    from reversim.commands import COMMANDS

    parser = argparse.ArgumentParser(
        prog="revsim",
        description="Revsim CLI: exact and sampled checks of time-reversal identities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Commands:
  run <scenario>   Run a scenario (--seed N --samples N --tol X --workers N
                   --out DIR --format csv|json)
  list             List bundled scenarios
  show <name>      Print a bundled scenario
  config           show | path | set <key> <value>

Exit codes: 0 all checks passed, 1 a check failed, 2 invalid input.
The REVERSIM_ENUM_CAP environment variable overrides the enumeration cap.
""",
    )
    parser.add_argument(
        "command",
        nargs="?",
        help="Command (run, list, show, config)",
    )
    parser.add_argument(
        "args",
        nargs=argparse.REMAINDER,
        help="Command arguments",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable verbose output",
    )

    args = parser.parse_args(argv)

    # -v may also follow the command
    rest = [a for a in args.args if a not in ("-v", "--verbose")]
    verbose = args.verbose or len(rest) != len(args.args)
    _configure_logging(verbose)

    if not args.command:
        parser.print_help()
        return 2

    if args.command in COMMANDS:
        return COMMANDS[args.command](rest, verbose=verbose)

    print(f"Error: unknown command '{args.command}'", file=sys.stderr)
    print(f"Commands: {', '.join(sorted(COMMANDS))}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
