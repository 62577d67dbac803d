"""Run command: execute a scenario and report its checks.

Usage:
    revsim run <scenario> [--seed N] [--samples N] [--tol X] [--workers N]
                          [--out DIR] [--format csv|json]

<scenario> is a path to a JSON file or the name of a bundled scenario
(see `revsim list`).

Exit codes:
    0 - every check passed
    1 - a check failed (the worst witness is printed)
    2 - invalid input (bad scenario, unknown flag, malformed value)

Output:
    A summary table always goes to stdout. With --out, the report is
    also written to DIR: <name>.csv with the main table plus
    <name>_checks.csv and friends, or <name>.json with --format json.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Optional

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_INPUT = 2

KNOWN_OPTIONS = {"seed", "samples", "tol", "workers", "out", "format"}
# Table rows shown on stdout before eliding
MAX_ROWS = 32


def _parse_args(args: list[str]) -> tuple[Optional[str], dict[str, str]]:
    """Parse command arguments into path and options.

    Args:
        args: Command arguments

    Returns:
        Tuple of (path, options_dict)
    """
    path = None
    options: dict[str, str] = {}
    i = 0

    while i < len(args):
        arg = args[i]
        if arg.startswith("--"):
            key = arg[2:]
            if i + 1 < len(args) and not args[i + 1].startswith("--"):
                options[key] = args[i + 1]
                i += 2
            else:
                options[key] = "true"
                i += 1
        else:
            if path is None:
                path = arg
            i += 1

    return path, options


def _typed_options(options: dict[str, str]) -> dict[str, Any]:
    """Convert option strings; ValueError names the offending flag."""
    unknown = sorted(set(options) - KNOWN_OPTIONS)
    if unknown:
        raise ValueError(f"unknown option --{unknown[0]}")
    out: dict[str, Any] = {}
    for key in ("seed", "samples", "workers"):
        if key in options:
            try:
                out[key] = int(options[key])
            except ValueError:
                raise ValueError(f"--{key} expects an integer, got {options[key]!r}") from None
    if "tol" in options:
        try:
            out["tol"] = float(options["tol"])
        except ValueError:
            raise ValueError(f"--tol expects a number, got {options['tol']!r}") from None
        if not out["tol"] > 0:
            raise ValueError("--tol must be positive")
    for key in ("samples", "workers"):
        if key in out and out[key] < 1:
            raise ValueError(f"--{key} must be at least 1")
    fmt = options.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ValueError(f"--format must be csv or json, got {fmt!r}")
    out["format"] = fmt
    if "out" in options:
        out["out"] = Path(options["out"])
    return out


def _print_report(report: Any) -> None:
    """Print checks and the main table to stdout."""
    from reversim.scenario import format_value

    status = "PASSED" if report.passed else "FAILED"
    print(f"\n{'=' * 60}")
    print(f"  Scenario: {report.name} ({report.kind})")
    if report.reference:
        print(f"  Reference: {report.reference}")
    print(f"  Status: {status}")
    print(f"{'=' * 60}")

    if report.checks:
        print("\n  Checks:")
        print(f"  {'-' * 56}")
        print(f"  {'Check':<28} {'Value':>14} {'Tol':>10}")
        print(f"  {'-' * 56}")
        for c in report.checks:
            mark = "+" if c.passed else "x"
            value = f"{c.value:.3e}" if isinstance(c.value, float) else str(c.value)
            tol = f"{c.tol:.0e}" if c.tol is not None else "-"
            print(f"  [{mark}] {c.name:<24} {value:>14} {tol:>10}")

    if report.tables:
        table = report.tables[0]
        print(f"\n  {table.name}:")
        print(f"  {'-' * 56}")
        print("  " + "  ".join(table.columns))
        for row in table.rows[:MAX_ROWS]:
            print("  " + "  ".join(format_value(x) for x in row))
        if len(table.rows) > MAX_ROWS:
            print(f"  ... ({len(table.rows) - MAX_ROWS} more rows)")

    if report.traces:
        print("\n  Traces:")
        for name, values in report.traces.items():
            print(f"  {name:<8} " + " ".join(f"{v:.4f}" for v in values))

    print()


def run_command(args: list[str], verbose: bool = False) -> int:
    """Run a scenario file or bundled scenario.

    Args:
        args: Command arguments [scenario] [--seed N] [--samples N] [--tol X] [--out DIR] [--format F]
        verbose: Enable verbose output

    Returns:
        Exit code (0 all checks pass, 1 a check failed, 2 invalid input)
    """
    from reversim.errors import CheckError, InputError
    from reversim.scenario import RunOptions, load_scenario, resolve_scenario, run_scenario, write_report

    target, options = _parse_args(args)

    if not target:
        print("Error: run command requires a scenario path or name", file=sys.stderr)
        print(
            "Usage: revsim run <scenario> [--seed N] [--samples N] [--tol X] [--out DIR] [--format csv|json]",
            file=sys.stderr,
        )
        return EXIT_INVALID_INPUT

    try:
        opts = _typed_options(options)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT

    try:
        path = resolve_scenario(target)
        if verbose:
            print(f"Running: {path}")
        scenario = load_scenario(path)
        report = run_scenario(
            scenario,
            RunOptions(
                seed=opts.get("seed"),
                samples=opts.get("samples"),
                tol=opts.get("tol"),
                workers=opts.get("workers"),
            ),
        )
    except (InputError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except CheckError as e:
        print(f"Check failed: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    _print_report(report)

    if "out" in opts:
        written = write_report(report, opts["out"], opts["format"])
        for p in written:
            print(f"Wrote: {p}")

    if not report.passed:
        for c in report.failures:
            print(f"Check failed: {c.name} = {c.value} (tol {c.tol}); witness: {c.witness}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK
