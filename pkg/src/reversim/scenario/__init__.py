"""Scenario module: JSON scenario files, their runners and reports.

Example:
    from reversim.scenario import load_scenario, resolve_scenario, run_scenario

    report = run_scenario(load_scenario(resolve_scenario("markov-2state")))
    report.passed
"""

from .catalog import CATALOG_DIR, CatalogEntry, list_scenarios, resolve_scenario
from .loader import load_scenario, parse_scenario
from .report import Check, Report, Table, file_stem, format_value, write_csv, write_json, write_report
from .runners import RUNNERS, RunOptions, run_scenario
from .schema import KINDS, SCENARIO_ADAPTER, Scenario

__all__ = [
    "CATALOG_DIR",
    "CatalogEntry",
    "Check",
    "KINDS",
    "RUNNERS",
    "Report",
    "RunOptions",
    "SCENARIO_ADAPTER",
    "Scenario",
    "Table",
    "file_stem",
    "format_value",
    "list_scenarios",
    "load_scenario",
    "parse_scenario",
    "resolve_scenario",
    "run_scenario",
    "write_csv",
    "write_json",
    "write_report",
]
