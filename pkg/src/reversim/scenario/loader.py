"""Loader: read and validate scenario files."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from ..errors import ScenarioError
from .schema import SCENARIO_ADAPTER, Scenario

logger = logging.getLogger(__name__)


def _field_path(loc: tuple[Any, ...]) -> str:
    # Discriminated unions insert the tag ("reversal", ...) after the root
    parts = [str(p) for p in loc]
    return ".".join(parts[1:] if len(parts) > 1 else parts)


def _line_of(text: str, loc: tuple[Any, ...]) -> int | None:
    """Line of the first key named like the innermost string in loc."""
    keys = [p for p in loc if isinstance(p, str)]
    if not keys:
        return None
    needle = f'"{keys[-1]}"'
    pos = text.find(needle)
    if pos < 0:
        return None
    return text.count("\n", 0, pos) + 1


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse and validate scenario JSON.

    Raises:
        ScenarioError: bad JSON (with line) or a schema violation (with field)
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{source}: invalid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(data, dict):
        raise ScenarioError(f"{source}: top level must be an object")
    if "kind" not in data:
        raise ScenarioError(f"{source}: missing discriminator", field="kind", line=1)
    try:
        scenario = SCENARIO_ADAPTER.validate_python(data)
    except ValidationError as e:
        err = e.errors()[0]
        loc = tuple(err["loc"])
        raise ScenarioError(
            f"{source}: {err['msg']}",
            field=_field_path(loc) if loc else None,
            line=_line_of(text, loc),
        ) from e
    logger.debug("Loaded scenario %s (%s) from %s", scenario.name, scenario.kind, source)
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"cannot read {path}: {e.strerror}") from e
    return parse_scenario(text, source=str(path))
