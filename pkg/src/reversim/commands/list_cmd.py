"""List command: show the bundled scenarios.

Usage:
    revsim list
"""

from __future__ import annotations


def list_command(args: list[str], verbose: bool = False) -> int:
    """Print every bundled scenario with its kind and reference.

    Returns:
        Exit code (0 for success)
    """
    from reversim.scenario import list_scenarios

    entries = list_scenarios()
    width = max((len(e.name) for e in entries), default=4)
    print(f"{'Name':<{width}}  {'Kind':<12}  Reference")
    print("-" * (width + 60))
    for e in entries:
        print(f"{e.name:<{width}}  {e.kind:<12}  {e.reference}")
        if verbose and e.description:
            print(f"{'':<{width}}  {'':<12}  {e.description}")
    return 0
