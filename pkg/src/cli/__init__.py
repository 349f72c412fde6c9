"""Command-line surface: configuration files, initial-data presets and writers."""

from .config import ConfigModel, load_config, parse_config_text, render_config, validate_config
from .presets import PRESETS, initial_state

__all__ = [
    "PRESETS",
    "ConfigModel",
    "initial_state",
    "load_config",
    "parse_config_text",
    "render_config",
    "validate_config",
]
