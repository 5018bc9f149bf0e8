"""Hadamard Sojourn

Shared plumbing: run configuration, report types, exact-string output.
"""
__version__ = "0.1.0"

from .types import (
    CheckReport,
    MeasureKind,
    Mismatch,
    OutputFormat,
    Subcommand,
)
from .config import ConfigError, RunConfig, load_config, load_settings, merge_configs

__all__ = [
    "CheckReport",
    "MeasureKind",
    "Mismatch",
    "OutputFormat",
    "Subcommand",
    "ConfigError",
    "RunConfig",
    "load_config",
    "load_settings",
    "merge_configs",
]
