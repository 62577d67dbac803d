"""Shared pytest setup: every test sees default settings and no user config."""

import os
from unittest.mock import patch

import pytest

from reversim import config


@pytest.fixture(autouse=True)
def isolated_config(tmp_path):
    """Point the config file into tmp_path and drop REVERSIM_* variables."""
    config_dir = tmp_path / ".config" / "reversim"
    config_file = config_dir / "config.yaml"
    clean_env = {k: v for k, v in os.environ.items() if not k.startswith("REVERSIM_")}

    with patch.object(config, "CONFIG_DIR", config_dir), \
         patch.object(config, "CONFIG_FILE", config_file), \
         patch.dict(os.environ, clean_env, clear=True):
        yield config_dir, config_file
