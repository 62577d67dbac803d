"""Config command: inspect and change settings.

Usage:
    revsim config show                 Show effective config
    revsim config path                 Print the config file location
    revsim config set <key> <value>    Store a setting in the config file

Examples:
    revsim config set enumeration_cap 50000000
    revsim config set workers 4
"""

from __future__ import annotations

SUBCOMMANDS = "show, path, set"


def config_command(args: list[str], verbose: bool = False) -> int:
    """Execute config subcommand.

    Args:
        args: Command arguments [subcommand, ...]
        verbose: Enable verbose output

    Returns:
        Exit code (0 for success, 2 for bad usage)
    """
    if not args:
        print("Usage: revsim config <subcommand>")
        print(f"Subcommands: {SUBCOMMANDS}")
        return 2

    subcommand = args[0]
    subargs = args[1:]

    if subcommand == "show":
        return _show_config(verbose)
    elif subcommand == "path":
        from reversim import config

        print(config.get_config_path())
        return 0
    elif subcommand == "set":
        return _set(subargs, verbose)
    else:
        print(f"Unknown subcommand: {subcommand}")
        print(f"Subcommands: {SUBCOMMANDS}")
        return 2


def _set(args: list[str], verbose: bool) -> int:
    """Set one setting, converted to the type of its default."""
    from reversim import config

    if len(args) < 2:
        print("Usage: revsim config set <key> <value>")
        return 2

    key, raw = args[0], args[1]
    try:
        value = config.coerce(key, raw)
        config.set_setting(key, value)
    except (KeyError, ValueError) as e:
        print(f"Error: {e}")
        return 2

    print(f"Set {key} = {value}")
    if verbose:
        print(f"Config file: {config.get_config_path()}")
    return 0


def _show_config(verbose: bool) -> int:
    """Show current configuration."""
    from reversim import config
    import yaml

    cfg = config.get_config()

    print(f"Config file: {config.get_config_path()}")
    overridden = [key for key in config.ENV_OVERRIDES if config.env_override(key) is not None]
    if overridden:
        print(f"From environment: {', '.join(overridden)}")
    print()
    print(yaml.safe_dump(cfg, default_flow_style=False))

    return 0
