"""Configuration loader for the sojourn toolkit."""
from pathlib import Path
from typing import Any, Literal, Optional

import yaml
from pydantic import BaseModel, Field, InstanceOf, ValidationError, field_validator, model_validator

from core.walk_paths import PHI_STAR, QubitState
from shared.types import MeasureKind, OutputFormat, Subcommand

DEFAULT_CONFIG_PATH = Path("config/config.yaml")

DEFAULTS: dict[str, Any] = {
    "walk": {"n_max": 24, "max_n": 200},
    "series": {"default_order": 12, "max_order": 40},
    "verify": {"order": 12, "x_min": -5, "x_max": 5},
    "output": {"format": "json"},
    "logging": {"level": "INFO", "file": None},
}


class ConfigError(ValueError):
    """Unreadable or invalid configuration file."""


class WalkSettings(BaseModel):
    n_max: int = Field(ge=0)
    max_n: int = Field(ge=1)


class SeriesSettings(BaseModel):
    default_order: int = Field(ge=2)
    max_order: int = Field(ge=2)


class VerifySettings(BaseModel):
    order: int = Field(ge=2)
    x_min: int
    x_max: int


class OutputSettings(BaseModel):
    format: OutputFormat


class LoggingSettings(BaseModel):
    level: Literal["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"]
    file: Optional[str] = None

    @field_validator("level", mode="before")
    @classmethod
    def upper_level(cls, value: Any) -> Any:
        return value.upper() if isinstance(value, str) else value


class Settings(BaseModel):
    walk: WalkSettings
    series: SeriesSettings
    verify: VerifySettings
    output: OutputSettings
    logging: LoggingSettings


def load_config(path: str | Path) -> dict[str, Any]:
    """Load YAML configuration file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")

    with open(path) as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Malformed YAML in {path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a mapping, got {type(data).__name__}")
    return data


def merge_configs(*configs: dict) -> dict[str, Any]:
    """Deep merge multiple configs, later ones override earlier."""
    result = {}
    for config in configs:
        for key, value in config.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = merge_configs(result[key], value)
            else:
                result[key] = value
    return result


def load_settings(path: Optional[str | Path] = None) -> dict[str, Any]:
    """Defaults merged with a config file, validated section by section.

    An explicit ``path`` must exist; without one, ``config/config.yaml`` is
    used when present.
    """
    if path is not None:
        merged = merge_configs(DEFAULTS, load_config(path))
    elif DEFAULT_CONFIG_PATH.exists():
        merged = merge_configs(DEFAULTS, load_config(DEFAULT_CONFIG_PATH))
    else:
        merged = merge_configs(DEFAULTS)
    try:
        return Settings.model_validate(merged).model_dump(mode="json")
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration\n{e}") from e


class RunConfig(BaseModel):
    """One validated CLI invocation."""
    subcommand: Subcommand
    order: int = Field(default=12, ge=2)
    max_order: int = Field(default=40, ge=2)
    theorem: int = 1
    n: Optional[int] = None
    n_max: int = Field(default=24, ge=0)
    max_n: int = Field(default=200, ge=1)
    start: int = 0
    kind: MeasureKind = MeasureKind.A
    state: InstanceOf[QubitState] = PHI_STAR
    x_min: int = -5
    x_max: int = 5
    format: OutputFormat = OutputFormat.JSON
    output: Optional[Path] = None

    @field_validator("state", mode="before")
    @classmethod
    def parse_state(cls, value: Any) -> QubitState:
        if isinstance(value, str):
            return QubitState.parse(value)
        return value

    @field_validator("theorem")
    @classmethod
    def known_theorem(cls, value: int) -> int:
        if value not in (1, 2):
            raise ValueError(f"theorem must be 1 or 2, got {value}")
        return value

    @model_validator(mode="after")
    def check_ranges(self) -> "RunConfig":
        if self.order > self.max_order:
            raise ValueError(f"order {self.order} exceeds max_order {self.max_order}")
        if self.subcommand in (Subcommand.DP, Subcommand.FIRST_RETURN) and self.n_max > self.max_n:
            raise ValueError(f"n_max {self.n_max} exceeds max_n {self.max_n}")
        if self.subcommand is Subcommand.MEASURE:
            if self.n is None or self.n < 0 or self.n % 2:
                raise ValueError(f"measure needs an even n >= 0, got {self.n}")
            if self.n > self.max_n:
                raise ValueError(f"n {self.n} exceeds max_n {self.max_n}")
            if self.kind is MeasureKind.CLASSICAL_UNIFORM and self.n < 2:
                raise ValueError("classical-uniform needs n >= 2")
        if self.subcommand is Subcommand.VERIFY and not self.x_min <= -1 < 1 <= self.x_max:
            raise ValueError(f"need x_min <= -1 < 1 <= x_max, got [{self.x_min}, {self.x_max}]")
        if self.subcommand is Subcommand.FIRST_RETURN and self.n_max < 1:
            raise ValueError(f"first-return needs n_max >= 1, got {self.n_max}")
        return self

    @classmethod
    def from_settings(cls, subcommand: Subcommand, settings: dict[str, Any], **overrides: Any) -> "RunConfig":
        """Build from merged settings, letting non-None CLI values win."""
        base = {
            "subcommand": subcommand,
            "order": settings["series"]["default_order"],
            "max_order": settings["series"]["max_order"],
            "n_max": settings["walk"]["n_max"],
            "max_n": settings["walk"]["max_n"],
            "x_min": settings["verify"]["x_min"],
            "x_max": settings["verify"]["x_max"],
            "format": settings["output"]["format"],
        }
        if subcommand is Subcommand.VERIFY:
            base["order"] = settings["verify"]["order"]
        base.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**base)
