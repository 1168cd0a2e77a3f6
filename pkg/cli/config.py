"""
Experiment Configuration Module

Loads the JSON file of a run and merges command-line overrides into it.

Key Features:
- One JSON document per run: {"kind", "seed", "out", "threads", "format", "params": {...}}
- Flags given on the command line win over values in the file
- Required parameters per experiment kind, checked before anything is computed
- Desk-scale caps on dimensions and radii

Dependencies:
- json: For reading the configuration file
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

KINDS = ("exponents", "weights", "decay", "extend-scaling", "wavepackets", "plot")
FORMATS = ("csv", "json")
DEFAULT_OUT = "results"
MAX_EXPONENT_DIMENSION = 64
MAX_FIELD_DIMENSION = 3

REQUIRED_PARAMS = {
    "exponents": ("d",),
    "weights": ("action", "alpha", "constant"),
    "decay": ("recipe", "d"),
    "extend-scaling": ("d", "p", "alpha", "weight", "f", "R"),
    "wavepackets": ("R", "delta", "f"),
    "plot": ("csv", "plot"),
}


class ConfigError(ValueError):
    """Malformed or incomplete experiment configuration."""


@dataclass
class ExperimentConfig:
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    out: str = DEFAULT_OUT
    seed: int = 0
    threads: int = 1
    format: str = "csv"

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def echo(self) -> Dict[str, Any]:
        """The configuration as written into every JSON summary."""
        return {
            "kind": self.kind,
            "seed": self.seed,
            "threads": self.threads,
            "format": self.format,
            "params": dict(sorted(self.params.items())),
        }


def read_config_file(path) -> Dict[str, Any]:
    """
    Read a configuration file.

    Raises:
        ConfigError: If the file is missing or is not a JSON object
    """
    path = Path(path)
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return data


def build_config(
    kind: str,
    file_data: Optional[Dict[str, Any]] = None,
    overrides: Optional[Dict[str, Any]] = None,
    params: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    """
    Merge file values, global flag overrides and subcommand parameters into a validated config.

    Args:
        kind: Experiment kind named by the subcommand
        file_data: Parsed configuration file, if any
        overrides: Global flags (seed, out, threads, format); None values are ignored
        params: Subcommand parameters; None values are ignored

    Returns:
        ExperimentConfig: validated configuration

    Raises:
        ConfigError: If the kinds disagree, a required parameter is missing or a value is out of range
    """
    data = dict(file_data or {})
    file_kind = data.get("kind")
    if file_kind is not None and file_kind != kind:
        raise ConfigError(f"config describes a {file_kind!r} run, not {kind!r}")

    merged = dict(data.get("params") or {})
    merged.update({k: v for k, v in (params or {}).items() if v is not None})
    values = {k: data[k] for k in ("seed", "out", "threads", "format") if k in data}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})

    config = ExperimentConfig(kind=kind, params=merged, **values)
    validate_config(config)
    return config


def validate_config(config: ExperimentConfig):
    if config.kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {config.kind!r}; expected one of {KINDS}")
    if config.format not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}, got {config.format!r}")
    if not isinstance(config.seed, int) or not 0 <= config.seed < 2**64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {config.seed!r}")
    if not isinstance(config.threads, int) or config.threads < 1:
        raise ConfigError(f"threads must be a positive integer, got {config.threads!r}")

    for name in REQUIRED_PARAMS[config.kind]:
        if config.params.get(name) is None:
            raise ConfigError(f"{name} not defined in config")

    d = config.params.get("d")
    if d is not None:
        if not isinstance(d, int):
            raise ConfigError(f"d must be an integer, got {d!r}")
        limit = MAX_EXPONENT_DIMENSION if config.kind == "exponents" else MAX_FIELD_DIMENSION
        if config.kind in ("extend-scaling", "wavepackets") and not 2 <= d <= limit:
            raise ConfigError(f"field experiments run in d = 2 or d = 3, got {d}")
        if not 1 <= d <= limit:
            raise ConfigError(f"d must lie in [1, {limit}], got {d}")
    logger.debug("config for %s validated: %s", config.kind, sorted(config.params))
