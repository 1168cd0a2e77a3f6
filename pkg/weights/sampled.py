"""
Sampled Weight Module

Nonnegative weights sampled at the cell centers of a uniform grid over an
axis-aligned box, and the binary grid file they are stored in.

Key Features:
- Cell centers at lower + (i + 1/2) h along every axis
- Nearest-cell lookup (zero outside the box)
- Binary grid files: little-endian header (d, lower corner, upper corner, spacing)
  followed by the values as row-major 64-bit floats

Dependencies:
- numpy: For the value array and the binary encoding
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from numerics.errors import DomainError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass
class SampledWeight:
    d: int
    lower: np.ndarray
    spacing: float
    values: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != self.d or self.lower.shape != (self.d,):
            raise DomainError(f"weight grid must be {self.d}-dimensional", "values")
        if self.spacing <= 0:
            raise DomainError(f"grid spacing must be positive, got {self.spacing}", "spacing")
        if np.any(self.values < 0):
            raise DomainError("weights must be nonnegative", "values")

    @property
    def shape(self):
        return self.values.shape

    @property
    def upper(self) -> np.ndarray:
        return self.lower + np.asarray(self.shape) * self.spacing

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.d

    def axes(self) -> List[np.ndarray]:
        """Cell-center coordinates along each axis."""
        return [self.lower[k] + (np.arange(n) + 0.5) * self.spacing for k, n in enumerate(self.shape)]

    def cell_centers(self) -> np.ndarray:
        grids = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def integral(self) -> float:
        return float(self.values.sum() * self.cell_volume)

    def value_at(self, points) -> np.ndarray:
        """Value of the cell containing each point, 0 outside the box."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        index = np.floor((points - self.lower) / self.spacing).astype(np.int64)
        inside = np.all((index >= 0) & (index < np.asarray(self.shape)), axis=1)
        result = np.zeros(len(points))
        if np.any(inside):
            result[inside] = self.values[tuple(index[inside].T)]
        return result


def box_weight(lower, upper, spacing: float, function, metadata=None) -> SampledWeight:
    """Sample function(points) at the cell centers of the grid over [lower, upper]."""
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    shape = tuple(int(n) for n in np.ceil((upper - lower) / spacing - 1e-9))
    if any(n < 1 for n in shape):
        raise DomainError(f"empty box [{lower}, {upper}]", "box")
    template = SampledWeight(len(shape), lower, spacing, np.zeros(shape))
    values = np.asarray(function(template.cell_centers()), dtype=float).reshape(shape)
    return SampledWeight(len(shape), lower, spacing, values, dict(metadata or {}))


def write_weight_grid(weight: SampledWeight, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(np.asarray([weight.d], dtype="<i8").tobytes())
        f.write(np.asarray(weight.lower, dtype="<f8").tobytes())
        f.write(np.asarray(weight.upper, dtype="<f8").tobytes())
        f.write(np.asarray([weight.spacing], dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(weight.values, dtype="<f8").tobytes())
    logger.debug("weight grid %s written to %s", weight.shape, path)
    return path


def read_weight_grid(path) -> SampledWeight:
    """
    Read a binary weight grid written by write_weight_grid.

    Raises:
        PreconditionError: If the file is truncated or its header is inconsistent
    """
    raw = Path(path).read_bytes()
    if len(raw) < 8:
        raise PreconditionError(f"{path} is too short to hold a weight grid", "weight")
    d = int(np.frombuffer(raw, dtype="<i8", count=1)[0])
    if not 1 <= d <= 8:
        raise PreconditionError(f"{path} declares dimension {d}", "weight")
    offset = 8 + 8 * (2 * d + 1)
    if len(raw) < offset:
        raise PreconditionError(f"{path} ends inside its {d}-dimensional header", "weight")
    header = np.frombuffer(raw, dtype="<f8", count=2 * d + 1, offset=8)
    if not np.all(np.isfinite(header)):
        raise PreconditionError(f"{path} has a non-finite header entry", "weight")
    lower, upper, spacing = header[:d], header[d:2 * d], float(header[2 * d])
    if spacing <= 0:
        raise PreconditionError(f"{path} declares spacing {spacing}", "weight")
    if np.any(upper <= lower):
        raise PreconditionError(f"{path} declares an empty box [{lower}, {upper}]", "weight")
    available = (len(raw) - offset) // 8
    cells = (upper - lower) / spacing
    if float(np.prod(cells)) > available + 0.5:
        raise PreconditionError(f"{path} holds {available} values, header needs {float(np.prod(cells)):.0f}", "weight")
    shape = tuple(int(round(n)) for n in cells)
    if min(shape) < 1:
        raise PreconditionError(f"{path} declares a box thinner than one cell", "weight")
    expected = int(np.prod(shape))
    if len(raw) - offset != 8 * expected:
        raise PreconditionError(f"{path} holds {available} values, header needs {expected}", "weight")
    values = np.frombuffer(raw, dtype="<f8", offset=offset).reshape(shape).copy()
    if not np.all(np.isfinite(values)):
        raise PreconditionError(f"{path} holds non-finite weight values", "weight")
    return SampledWeight(d, lower.copy(), spacing, values)
