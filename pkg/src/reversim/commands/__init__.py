"""CLI commands module.

Each subcommand is implemented in its own file.
The main CLI dispatches to these command modules.

Commands:
    config  - Show or change settings
    list    - List the bundled scenarios
    run     - Run a scenario, print its checks, optionally write the report
    show    - Print a bundled scenario's JSON
"""

from .config_cmd import config_command
from .list_cmd import list_command
from .run import run_command
from .show import show_command

# Registry of available commands
COMMANDS = {
    "config": config_command,
    "list": list_command,
    "run": run_command,
    "show": show_command,
}

__all__ = [
    "COMMANDS",
    "config_command",
    "list_command",
    "run_command",
    "show_command",
]
