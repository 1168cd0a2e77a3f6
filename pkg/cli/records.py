"""
Result Files Module

Writes the artifacts of a run: a CSV table, a JSON summary and a run log.

Key Features:
- Values converted to JSON/CSV-compatible types (Fractions as "p/q", numpy scalars as float)
- Floats rendered with 12 significant digits so reruns produce byte-identical files
- Integrity re-read of every written file
- Wall-clock timings kept out of the byte-stable artifacts, in run_log.json

Dependencies:
- pandas: For CSV emission
- python-dateutil: For UTC timestamps of the run log
"""

import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from dateutil import tz

from exponents.rational import format_rational

logger = logging.getLogger(__name__)

ARTIFACT_VERSION = 1
FLOAT_FORMAT = ".12g"
CSV_NAME = "results.csv"
SUMMARY_NAME = "summary.json"
RUN_LOG_NAME = "run_log.json"


def to_serializable(value):
    """
    Convert values to JSON compatible types

    Example:
        >>> to_serializable({"alpha": Fraction(4, 3), "norms": np.array([1.0, 2.5])})
        {'alpha': '4/3', 'norms': [1.0, 2.5]}
    """
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.ndarray):
        return [to_serializable(item) for item in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_serializable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_serializable(item) for item in value]
    if isinstance(value, Path):
        return str(value)
    return value


def format_cell(value) -> str:
    """Render one CSV cell; floats get 12 significant digits."""
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def verify_file_written(filepath, expected_columns: Optional[Sequence[str]] = None) -> bool:
    """
    Verifies that the file has been written correctly with valid data structure

    JSON files must hold an object with an artifact_version; CSV files must have a header
    row, holding expected_columns when given.
    """
    path = Path(filepath)
    try:
        if path.suffix == ".json":
            with open(path, "r") as f:
                data = json.load(f)
            return bool(data and "artifact_version" in data)
        header = pd.read_csv(path, nrows=0, dtype=str).columns
        return bool(len(header)) and all(column in header for column in (expected_columns or ()))
    except (json.JSONDecodeError, FileNotFoundError, pd.errors.EmptyDataError, pd.errors.ParserError):
        return False


def write_csv(rows: List[Dict[str, Any]], path, columns: Optional[Sequence[str]] = None) -> Path:
    """Write rows as a CSV with a header row; cells are preformatted strings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = list(columns) if columns is not None else (list(rows[0]) if rows else [])
    frame = pd.DataFrame([[format_cell(row.get(c)) for c in columns] for row in rows], columns=columns, dtype=object)
    frame.to_csv(path, index=False, lineterminator="\n")
    if not verify_file_written(path, columns):
        logger.warning("could not verify that %s was written correctly", path)
    return path


def write_json(data: Dict[str, Any], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(json.dumps(to_serializable(data), indent=2, sort_keys=True) + "\n")
    if not verify_file_written(path):
        logger.warning("could not verify that %s was written correctly", path)
    return path


@dataclass
class ExperimentRecord:
    """One checked quantity of a run."""

    name: str
    value: Any
    bound: Any = None
    tolerance: Optional[float] = None
    passed: bool = True
    wall_time: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "bound": self.bound,
            "tolerance": self.tolerance,
            "pass": self.passed,
            **self.details,
        }


def build_summary(config_echo: Dict[str, Any], records: Sequence[ExperimentRecord], **extra) -> Dict[str, Any]:
    failures = [record.name for record in records if not record.passed]
    return {
        "artifact_version": ARTIFACT_VERSION,
        "config_echo": config_echo,
        "pass": not failures,
        "failures": failures,
        "records": [record.to_dict() for record in records],
        **extra,
    }


def write_run_log(out_dir, kind: str, records: Sequence[ExperimentRecord], total_time: float,
                  status: str, timestamp: Optional[datetime] = None) -> Path:
    timestamp = timestamp or datetime.now(tz.tzutc())
    log = {
        "artifact_version": ARTIFACT_VERSION,
        "kind": kind,
        "timestamp": timestamp.strftime("%Y-%m-%d %H:%M:%S UTC"),
        "status": status,
        "total_wall_time": round(total_time, 6),
        "wall_times": {record.name: round(record.wall_time, 6) for record in records},
    }
    return write_json(log, Path(out_dir) / RUN_LOG_NAME)
