"""
Extension Operator Module

Direct quadrature of the paraboloid extension operator
    Ef(x) = int_{B^{d-1}} exp(i (x' . omega + x_d |omega|^2)) f(omega) d omega
and of the sphere extension operator E_S g(x) = int_{S^{d-1}} exp(i x . sigma) g(sigma) d sigma,
plus a radial reduction for radial profiles and weighted norms of the resulting fields.

Key Features:
- Phase-resolution rule h_omega <= 1/(4 max|x|), enforced (aliasing is an error)
- Chunked evaluation in a fixed order, optionally over worker threads
- Radial profiles in 1-D: a cosine kernel for d = 2 and a Bessel kernel for d = 3
- Uniform evaluation grids of B_R and weighted L^p norms against sampled weights

Dependencies:
- numpy: For the oscillatory sums
- scipy.special: For the Bessel function J0
- concurrent.futures: For parallel point chunks
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from extension.profiles import FrequencyProfile
from extension.quadrature import DEFAULT_ORDER, interval_gauss
from numerics.errors import BudgetError, DomainError, PreconditionError, ResolutionError
from numerics.sphere import required_nodes
from weights.sampled import SampledWeight

logger = logging.getLogger(__name__)

CHUNK_ENTRIES = 1 << 21
FIELD_SPACING = 0.5
MAX_RADIUS = {2: 256.0, 3: 64.0}
MAX_FIELD_POINTS = 1 << 22


@dataclass(frozen=True)
class FieldSample:
    points: np.ndarray
    values: np.ndarray
    R: float
    h_omega: float
    spacing: Optional[float] = None

    @property
    def d(self) -> int:
        return int(self.points.shape[1])


def _max_radius(points: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(points, axis=1))) if len(points) else 0.0


def check_resolution(h_omega: float, points: np.ndarray):
    reach = _max_radius(points)
    if reach > 0 and h_omega > 1.0 / (4.0 * reach):
        raise ResolutionError(
            f"h_omega={h_omega:.4g} aliases at |x|={reach:.4g}: need h_omega <= {1.0 / (4.0 * reach):.4g}", "h_omega"
        )


def _chunked(points: np.ndarray, columns: int, kernel, threads: int) -> np.ndarray:
    size = max(1, CHUNK_ENTRIES // max(1, columns))
    blocks = [points[i:i + size] for i in range(0, len(points), size)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(kernel, blocks))
    return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)


def extend(f: FrequencyProfile, points, surface: Optional[str] = None, threads: int = 1) -> FieldSample:
    """
    Evaluate the extension operator of a sampled profile at the given points.

    Args:
        f: Frequency profile (paraboloid or sphere)
        points: Array of shape (N, d)
        surface: "paraboloid" or "sphere"; defaults to the profile's surface
        threads: Worker threads over point chunks

    Returns:
        FieldSample: complex values at the points

    Raises:
        ResolutionError: If the rule is too coarse for the farthest point
    """
    surface = surface or f.surface
    if surface != f.surface:
        raise DomainError(f"profile lives on the {f.surface}, not the {surface}", "surface")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != f.d:
        raise DomainError(f"points must have {f.d} coordinates", "points")

    if surface == "sphere":
        needed = required_nodes(_max_radius(points), 2.0)
        if f.size < needed:
            raise ResolutionError(f"{f.size} sphere nodes alias at these points: need {needed}", "nodes")
        phase_nodes = f.nodes.T

        def kernel(block):
            return np.exp(1j * (block @ phase_nodes)) @ (f.weights * f.values)
    else:
        check_resolution(f.h_omega, points)
        lifted = np.hstack([f.nodes, np.sum(f.nodes**2, axis=1, keepdims=True)]).T
        weighted = f.weights * f.values

        def kernel(block):
            return np.exp(1j * (block @ lifted)) @ weighted

    values = _chunked(points, f.size, kernel, threads)
    return FieldSample(points, values, _max_radius(points), f.h_omega)


def extend_radial(
    f: FrequencyProfile, points, threads: int = 1, order: int = DEFAULT_ORDER
) -> FieldSample:
    """
    Extension of a radial profile f(omega) = f0(|omega|) supported in the unit ball.

    d = 2: Ef(x) = 2 int_0^1 cos(x_1 r) exp(i x_2 r^2) f0(r) dr
    d = 3: Ef(x) = 2 pi int_0^1 J0(|x'| r) exp(i x_3 r^2) f0(r) r dr

    The radial integral uses composite Gauss panels of width f.h_omega, under the same
    resolution rule as the direct sum. Points sharing (|x'|, x_d) are evaluated once.
    """
    if f.recipe is None or f.recipe.radial is None:
        raise DomainError("extend_radial needs a profile with a radial recipe", "recipe")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    check_resolution(f.h_omega, points)
    r, w = interval_gauss(0.0, float(f.recipe.radius), f.h_omega, order)
    profile = f.recipe.radial(r)

    keys = np.column_stack([np.linalg.norm(points[:, :-1], axis=1), points[:, -1]])
    unique, inverse = np.unique(keys, axis=0, return_inverse=True)

    if f.d == 2:
        weighted = 2.0 * w * profile

        def kernel(block):
            return (np.cos(np.outer(block[:, 0], r)) * np.exp(1j * np.outer(block[:, 1], r**2))) @ weighted
    elif f.d == 3:
        weighted = 2.0 * math.pi * w * r * profile

        def kernel(block):
            return (special.j0(np.outer(block[:, 0], r)) * np.exp(1j * np.outer(block[:, 1], r**2))) @ weighted
    else:
        raise DomainError(f"radial reduction is available for d = 2 and d = 3, got {f.d}", "d")

    values = _chunked(unique, r.size, kernel, threads)[np.asarray(inverse).ravel()]
    return FieldSample(points, values, _max_radius(points), f.h_omega)


def field_grid(d: int, R: float, spacing: float = FIELD_SPACING, weight: Optional[SampledWeight] = None) -> np.ndarray:
    """
    Cell-centered grid points -R + (i + 1/2) spacing inside the closed ball B_R.

    When a weight is given only the points inside its box where it is positive are kept.

    Raises:
        DomainError: If d is not 2 or 3
        BudgetError: If R exceeds the cap for d or the candidate grid is too large
    """
    if d not in MAX_RADIUS:
        raise DomainError(f"field grids are available for d = 2 and d = 3, got {d}", "d")
    if R > MAX_RADIUS[d]:
        raise BudgetError(f"R={R} exceeds the cap {MAX_RADIUS[d]} for d={d}", "R")
    cells = int(round(2 * R / spacing))
    axis = -R + (np.arange(cells) + 0.5) * spacing
    axes = [axis] * d
    if weight is not None:
        axes = [axis[(axis >= lo) & (axis < hi)] for lo, hi in zip(weight.lower, weight.upper)]
    candidates = math.prod(len(a) for a in axes)
    if candidates > MAX_FIELD_POINTS:
        raise BudgetError(f"{candidates} candidate field points exceed {MAX_FIELD_POINTS}", "R")
    grids = np.meshgrid(*axes, indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=1)
    points = points[np.sum(points**2, axis=1) <= R * R]
    if weight is not None:
        points = points[weight.value_at(points) > 0]
    logger.debug("field grid d=%d R=%g: %d points", d, R, len(points))
    return points


def with_spacing(field: FieldSample, spacing: float) -> FieldSample:
    return FieldSample(field.points, field.values, field.R, field.h_omega, spacing)


def weighted_norm(field: FieldSample, weight: SampledWeight, p: float) -> float:
    """
    (sum |Ef|^p H spacing^d)^(1/p) over a grid field.

    Raises:
        PreconditionError: If the field is not a grid sample or the spacings are not integer multiples
    """
    if p < 1:
        raise DomainError(f"p must be at least 1, got {p}", "p")
    if field.spacing is None:
        raise PreconditionError("weighted norms need a field sampled on a uniform grid", "spacing")
    ratio = field.spacing / weight.spacing
    if not (abs(ratio - round(ratio)) < 1e-9 or abs(1 / ratio - round(1 / ratio)) < 1e-9):
        raise PreconditionError(
            f"field spacing {field.spacing} and weight spacing {weight.spacing} are incompatible", "spacing"
        )
    H = weight.value_at(field.points)
    total = float(np.sum(np.abs(field.values) ** p * H) * field.spacing**field.d)
    return total ** (1.0 / p)
