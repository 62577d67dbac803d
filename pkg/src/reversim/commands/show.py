"""Show command: print a bundled scenario's JSON.

Usage:
    revsim show <name>
"""

from __future__ import annotations

import sys


def show_command(args: list[str], verbose: bool = False) -> int:
    """Print the scenario file for a bundled name (or a path).

    Returns:
        Exit code (0 for success, 2 when the scenario is unknown)
    """
    from reversim.errors import ScenarioError
    from reversim.scenario import resolve_scenario

    if not args:
        print("Usage: revsim show <name>", file=sys.stderr)
        return 2
    try:
        path = resolve_scenario(args[0])
    except ScenarioError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    if verbose:
        print(f"# {path}")
    print(path.read_text(encoding="utf-8"), end="")
    return 0
