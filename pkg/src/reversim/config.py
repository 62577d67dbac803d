"""Configuration management for reversim.

Settings live in a YAML file at ~/.config/reversim/config.yaml.
Environment variables take precedence over the file, and the file
over the built-in defaults.

Example usage:
    from reversim.config import get_setting, set_setting

    cap = get_setting("enumeration_cap")     # REVERSIM_ENUM_CAP wins if set
    set_setting("workers", 4)
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any

import yaml

# Default config location
CONFIG_DIR = Path.home() / ".config" / "reversim"
CONFIG_FILE = CONFIG_DIR / "config.yaml"

# Environment variables that override individual settings
ENV_OVERRIDES: dict[str, str] = {
    "enumeration_cap": "REVERSIM_ENUM_CAP",
    "max_dim": "REVERSIM_MAX_DIM",
    "workers": "REVERSIM_WORKERS",
}

DEFAULT_CONFIG: dict[str, Any] = {
    "enumeration_cap": 10_000_000,
    "cluster_tol": 1.0e-8,
    "max_dim": 1024,
    "tol": 1.0e-10,
    "samples": 100_000,
    "workers": 1,
}


def get_config_path() -> Path:
    """Return the config file path."""
    return CONFIG_FILE


def load_config() -> dict[str, Any]:
    """Load config from file merged over the defaults.

    Returns:
        Config dict with every key of DEFAULT_CONFIG present
    """
    result = DEFAULT_CONFIG.copy()
    if CONFIG_FILE.exists():
        with open(CONFIG_FILE) as f:
            result.update(yaml.safe_load(f) or {})
    return result


def save_config(config: dict[str, Any]) -> None:
    """Save config to file.

    Args:
        config: Config dict to save
    """
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)
    with open(CONFIG_FILE, "w") as f:
        yaml.safe_dump(config, f, default_flow_style=False)


def env_override(key: str) -> Any:
    """Value of the environment variable for key, or None when unset."""
    env_var = ENV_OVERRIDES.get(key)
    raw = os.environ.get(env_var) if env_var else None
    return coerce(key, raw) if raw else None


def get_config() -> dict[str, Any]:
    """Get the effective config, with environment overrides applied."""
    config = load_config()
    for key in ENV_OVERRIDES:
        value = env_override(key)
        if value is not None:
            config[key] = value
    return config


def get_setting(key: str) -> Any:
    """Get one effective setting.

    Raises:
        KeyError: if the key is not a known setting
    """
    if key not in DEFAULT_CONFIG:
        raise KeyError(f"Unknown setting: {key!r}")
    return get_config()[key]


def set_setting(key: str, value: Any) -> None:
    """Persist one setting to the config file."""
    if key not in DEFAULT_CONFIG:
        raise KeyError(f"Unknown setting: {key!r}")
    config = load_config()
    config[key] = coerce(key, value) if isinstance(value, str) else value
    save_config(config)


def coerce(key: str, raw: str) -> Any:
    """Parse a string into the type of the default for key.

    Raises:
        KeyError: unknown key
        ValueError: raw does not parse
    """
    if key not in DEFAULT_CONFIG:
        raise KeyError(f"Unknown setting: {key!r}")
    default = DEFAULT_CONFIG[key]
    if isinstance(default, int):
        return int(float(raw))
    if isinstance(default, float):
        return float(raw)
    return raw
