"""
Weight Recipes Module

Named constructions of weights for certification and for the weighted-norm experiments.

Key Features:
- uniform: H = 1 on a box (growth exponent d)
- plane: H = 1 on the unit-thickness slab |x_k| < 1/2 (growth exponent d - 1)
- from-measure: H = R^alpha * (mu dilated by R) convolved with a bump of radius 1
- cantor: from-measure applied to a product Cantor measure

The bump is (1 - |x|^2)^3 on the unit ball, which is twice continuously differentiable.
Each atom's stencil is normalized on the grid itself, so the weight integrates to exactly
R^alpha and its mass inside B(x, r) never exceeds R^alpha mu(B(x/R, (r+1)/R)).

Dependencies:
- numpy: For stencils and scatter-adds
- fractal.measures: For the measures being smoothed
"""

import logging
import math

import numpy as np

from fractal.measures import FractalMeasure, cantor_measure
from numerics.errors import BudgetError, DomainError
from weights.sampled import SampledWeight, box_weight

logger = logging.getLogger(__name__)

DEFAULT_SPACING = 1.0 / 8.0
MAX_CELLS = 1 << 25
STENCIL_CHUNK = 1 << 22


def bump_profile(squared_radius: np.ndarray) -> np.ndarray:
    return np.clip(1.0 - squared_radius, 0.0, None) ** 3


def uniform_weight(d: int, half_width: float, spacing: float = DEFAULT_SPACING) -> SampledWeight:
    lower = np.full(d, -float(half_width))
    return box_weight(lower, -lower, spacing, lambda x: np.ones(len(x)), {"recipe": "uniform", "alpha": float(d)})


def plane_weight(d: int, half_width: float, spacing: float = DEFAULT_SPACING, axis: int = 0) -> SampledWeight:
    """Indicator of the slab |x_axis| < 1/2 inside [-half_width, half_width]^d; the box is cut to the slab."""
    if not 0 <= axis < d:
        raise DomainError(f"slab axis must lie in [0, {d}), got {axis}", "axis")
    lower = np.full(d, -float(half_width))
    upper = -lower
    lower[axis], upper[axis] = -0.5, 0.5
    return box_weight(
        lower,
        upper,
        spacing,
        lambda x: (np.abs(x[:, axis]) < 0.5).astype(float),
        {"recipe": "plane", "alpha": float(d - 1), "axis": axis},
    )


def weight_from_measure(mu: FractalMeasure, R: float, spacing: float = DEFAULT_SPACING) -> SampledWeight:
    """
    Sample H = R^alpha * mu(./R) * bump on a grid covering R*supp(mu) plus the bump radius.

    Args:
        mu: Atomic measure with claimed_alpha = alpha
        R: Dilation, R >= 1
        spacing: Grid spacing h (must resolve the bump: h <= 1/4)

    Returns:
        SampledWeight: total integral R^alpha; metadata carries the dilated atoms as anchors

    Raises:
        DomainError: If R < 1 or the spacing cannot resolve the bump
        BudgetError: If the grid would exceed the cell cap
    """
    if R < 1:
        raise DomainError(f"dilation must be at least 1, got {R}", "R")
    if spacing > 0.25:
        raise DomainError(f"spacing {spacing} cannot resolve a bump of radius 1", "spacing")
    d = mu.d
    centers = R * mu.atoms
    margin = 1.0 + 3 * spacing
    lower = centers.min(axis=0) - margin
    upper = centers.max(axis=0) + margin
    shape = tuple(int(n) for n in np.ceil((upper - lower) / spacing))
    if math.prod(shape) > MAX_CELLS:
        raise BudgetError(f"weight grid {shape} exceeds {MAX_CELLS} cells", "R")

    reach = int(math.ceil(1.0 / spacing + 0.5))
    offsets = np.stack(
        [g.ravel() for g in np.meshgrid(*([np.arange(-reach, reach + 1)] * d), indexing="ij")], axis=1
    )
    values = np.zeros(shape)
    scale = R**mu.claimed_alpha / spacing**d
    chunk = max(1, STENCIL_CHUNK // len(offsets))
    for start in range(0, len(centers), chunk):
        block = centers[start:start + chunk]
        base = np.floor((block - lower) / spacing).astype(np.int64)
        cells = base[:, None, :] + offsets[None, :, :]
        displacement = lower + (cells + 0.5) * spacing - block[:, None, :]
        stencil = bump_profile(np.sum(displacement**2, axis=2))
        stencil /= stencil.sum(axis=1, keepdims=True)
        stencil *= (scale * mu.masses[start:start + chunk])[:, None]
        np.add.at(values, tuple(cells.reshape(-1, d).T), stencil.ravel())

    logger.debug("weight from measure: R=%g, %d atoms, grid %s", R, mu.size, shape)
    metadata = {"recipe": "from-measure", "alpha": mu.claimed_alpha, "R": R, "anchors": centers}
    return SampledWeight(d, lower, spacing, values, metadata)


def cantor_weight(d: int, b: int, rho: float, n: int, R: float, spacing: float = DEFAULT_SPACING) -> SampledWeight:
    weight = weight_from_measure(cantor_measure(d, b, rho, n), R, spacing)
    weight.metadata.update({"recipe": "cantor", "b": b, "rho": rho, "n": n})
    return weight
