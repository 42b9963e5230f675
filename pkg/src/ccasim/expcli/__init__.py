"""Config-driven experiment runner and its command-line front end."""

from .config import (ConfigError, ExperimentConfig, Issue, EXPERIMENTS,
                     load_config, parse_config, validate_config)
from .defaults import emit_defaults, defaults_yaml
from .runner import run_experiment

__all__ = [
    "ConfigError", "ExperimentConfig", "Issue", "EXPERIMENTS",
    "load_config", "parse_config", "validate_config",
    "emit_defaults", "defaults_yaml", "run_experiment",
]
