"""Catalog: the scenario files bundled with the package."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..errors import ScenarioError
from .loader import load_scenario

CATALOG_DIR = Path(__file__).resolve().parent.parent / "catalog" / "scenarios"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    reference: str
    description: str
    path: Path


def list_scenarios() -> list[CatalogEntry]:
    """Every bundled scenario, sorted by file name."""
    entries = []
    for path in sorted(CATALOG_DIR.glob("*.json")):
        sc = load_scenario(path)
        entries.append(CatalogEntry(path.stem, sc.kind, sc.reference, sc.description, path))
    return entries


def resolve_scenario(target: str) -> Path:
    """A scenario path, or the bundled file for a catalog name.

    Raises:
        ScenarioError: neither an existing file nor a bundled name
    """
    path = Path(target)
    if path.is_file():
        return path
    bundled = CATALOG_DIR / (target if target.endswith(".json") else f"{target}.json")
    if bundled.is_file():
        return bundled
    names = ", ".join(p.stem for p in sorted(CATALOG_DIR.glob("*.json")))
    raise ScenarioError(f"no scenario file or bundled scenario '{target}' (bundled: {names})")
