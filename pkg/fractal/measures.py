"""
Self-Similar Measure Module

Finitely-atomic approximations of alpha-dimensional probability measures in R^d.

Key Features:
- Product Cantor measures: d copies of a level-n self-similar construction with
  b children of ratio rho per step
- Point masses and arbitrary atomic measures with validated masses
- Translation (used to check translation invariance of |mu^|)
- The largest radius R for which the atomic approximation still decays

Dependencies:
- numpy: For atom and mass arrays
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional

import numpy as np

from numerics.errors import BudgetError, DomainError

logger = logging.getLogger(__name__)

MAX_ATOMS = 1 << 22
MASS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class FractalMeasure:
    d: int
    atoms: np.ndarray
    masses: np.ndarray
    claimed_alpha: float
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.masses.size)

    @property
    def diameter(self) -> float:
        """Bounding-box diagonal, an upper bound for the diameter of the support."""
        if self.size < 2:
            return 0.0
        extent = self.atoms.max(axis=0) - self.atoms.min(axis=0)
        return float(np.linalg.norm(extent))

    @property
    def atom_scale(self) -> float:
        return float(self.metadata.get("atom_scale", 0.0))


def atomic_measure(atoms, masses, claimed_alpha: float, metadata: Optional[Dict[str, Any]] = None) -> FractalMeasure:
    """Validate and wrap an atomic probability measure."""
    atoms = np.atleast_2d(np.asarray(atoms, dtype=float))
    masses = np.asarray(masses, dtype=float).ravel()
    if atoms.shape[0] != masses.size:
        raise DomainError(f"{atoms.shape[0]} atoms but {masses.size} masses", "masses")
    if np.any(masses <= 0):
        raise DomainError("atom masses must be positive", "masses")
    if abs(masses.sum() - 1.0) > MASS_TOLERANCE * max(1, masses.size):
        raise DomainError(f"masses must sum to 1, got {masses.sum():.15f}", "masses")
    return FractalMeasure(atoms.shape[1], atoms, masses, float(claimed_alpha), dict(metadata or {}))


def point_mass(d: int, at=None, claimed_alpha: float = 0.0) -> FractalMeasure:
    location = np.zeros(d) if at is None else np.asarray(at, dtype=float)
    return atomic_measure(location[None, :], [1.0], claimed_alpha, {"recipe": "point"})


def cantor_offsets(b: int, rho: float) -> np.ndarray:
    """Left endpoints of the b children of [0, 1], equally spaced, first at 0 and last at 1 - rho."""
    return np.arange(b) * (1.0 - rho) / (b - 1)


def cantor_measure(d: int, b: int, rho: float, n: int) -> FractalMeasure:
    """
    Product of d level-n self-similar Cantor constructions on [0, 1].

    Each step replaces an interval of length L by b children of length rho*L whose
    left endpoints are equally spaced; atoms sit at the left endpoints of the level-n
    intervals and carry equal mass b^(-d n).

    Args:
        d: Ambient dimension
        b: Number of children per step (b >= 2)
        rho: Contraction ratio, 0 < rho and b*rho <= 1
        n: Depth (n >= 1)

    Returns:
        FractalMeasure: b^(d n) atoms, claimed_alpha = d log b / log(1/rho)

    Raises:
        DomainError: If the children overlap (b*rho > 1) or a parameter is out of range
        BudgetError: If the atom count exceeds the desk-scale cap

    Example:
        >>> mu = cantor_measure(1, 2, 1/3, 1)
        >>> mu.atoms.ravel().tolist(), mu.masses.tolist()
        ([0.0, 0.6666666666666667], [0.5, 0.5])
    """
    if d < 1:
        raise DomainError(f"dimension must be positive, got {d}", "d")
    if b < 2:
        raise DomainError(f"branch count must be at least 2, got {b}", "b")
    if not 0 < rho < 1:
        raise DomainError(f"contraction ratio must lie in (0, 1), got {rho}", "rho")
    if b * rho > 1 + 1e-12:
        raise DomainError(f"children overlap: b*rho = {b * rho} > 1", "rho")
    if n < 1:
        raise DomainError(f"depth must be at least 1, got {n}", "n")
    count = b ** (d * n)
    if count > MAX_ATOMS:
        raise BudgetError(f"{count} atoms exceed the cap of {MAX_ATOMS}", "n")

    offsets = cantor_offsets(b, rho)
    line = np.zeros(1)
    for level in range(n):
        line = (line[:, None] + offsets[None, :] * rho**level).ravel()

    axes = np.meshgrid(*([line] * d), indexing="ij")
    atoms = np.stack([axis.ravel() for axis in axes], axis=1)
    masses = np.full(count, 1.0 / count)
    alpha = d * math.log(b) / math.log(1.0 / rho)
    logger.debug("cantor measure d=%d b=%d rho=%g n=%d: %d atoms, alpha=%.6f", d, b, rho, n, count, alpha)
    metadata = {"recipe": "cantor", "b": b, "rho": rho, "n": n, "atom_scale": rho**n}
    return FractalMeasure(d, atoms, masses, alpha, metadata)


def translate(mu: FractalMeasure, shift) -> FractalMeasure:
    shift = np.asarray(shift, dtype=float)
    if shift.shape != (mu.d,):
        raise DomainError(f"shift must have shape ({mu.d},), got {shift.shape}", "shift")
    return replace(mu, atoms=mu.atoms + shift[None, :])


def valid_radius_max(mu: FractalMeasure) -> Optional[float]:
    """0.5 / atom_scale, or None when the measure has no atom scale (point masses)."""
    if mu.atom_scale <= 0:
        return None
    return 0.5 / mu.atom_scale
