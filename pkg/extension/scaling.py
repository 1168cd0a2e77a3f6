"""
R-scaling experiments for weighted extension norms.

For each radius R the profile is sampled at the rule spacing 1/(4R), its extension is
evaluated on the grid of B_R restricted to the support of the weight, and the weighted
L^p norm is recorded. A log-log fit of norm against R is compared with the exponent the
estimates predict:

- p = 2: 1/2 - (d - alpha)/(2(d + 1)) (weighted L^2 estimate over d-dimensional cube families)
- d = 3 and p = 3: the restriction exponent gamma0(3, alpha)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

import numpy as np

from exponents import gamma0, lebesgue_p, linear_l2_exponent, to_rational
from extension.operator import FIELD_SPACING, extend, extend_radial, field_grid, weighted_norm, with_spacing
from extension.profiles import Recipe, make_profile
from numerics.errors import DomainError
from numerics.fitting import fit_power_law
from weights.sampled import SampledWeight

logger = logging.getLogger(__name__)

SLOPE_TOLERANCE = 0.15
MIN_RADII = 4


def theorem_exponent(d: int, p: float, alpha) -> Fraction:
    """Predicted growth exponent of ||Ef||_{L^p(B_R; H)} in R."""
    alpha = to_rational(alpha)
    p = to_rational(p, "p")
    if p == 2:
        return linear_l2_exponent(d, alpha, d)
    if d >= 3 and p == lebesgue_p(d):
        return gamma0(d, alpha)
    raise DomainError(f"no exponent is recorded for d={d}, p={p}", "p")


@dataclass(frozen=True)
class ScalingResult:
    radii: List[float]
    norms: List[float]
    slope: float
    stderr: float
    exponent: Fraction
    tolerance: float = SLOPE_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.slope <= float(self.exponent) + self.tolerance

    def rows(self) -> List[Dict[str, float]]:
        return [
            {"R": R, "norm": norm, "log_R": float(np.log(R)), "log_norm": float(np.log(norm))}
            for R, norm in zip(self.radii, self.norms)
        ]


def norm_at_radius(
    recipe: Recipe, weight: SampledWeight, p: float, R: float, spacing: float = FIELD_SPACING, threads: int = 1
) -> float:
    d = len(recipe.center) + 1
    points = field_grid(d, R, spacing, weight=weight)
    if len(points) == 0:
        return 0.0
    h_omega = 1.0 / (4.0 * float(np.max(np.linalg.norm(points, axis=1))))
    profile = make_profile(d, recipe, h_omega)
    if recipe.radial is not None:
        field = extend_radial(profile, points, threads=threads)
    else:
        field = extend(profile, points, threads=threads)
    return weighted_norm(with_spacing(field, spacing), weight, p)


def scaling_experiment(
    recipe: Recipe,
    weight_factory: Callable[[float], SampledWeight],
    p: float,
    alpha,
    radii: Sequence[float],
    spacing: float = FIELD_SPACING,
    threads: int = 1,
) -> ScalingResult:
    """
    Fit the growth of the weighted extension norm over a geometric list of radii.

    Args:
        recipe: Profile recipe f
        weight_factory: Builds the weight H for a given R
        p: Lebesgue exponent
        alpha: Growth exponent of the weights
        radii: At least four increasing radii
        spacing: Evaluation grid spacing in x
        threads: Worker threads for the field evaluation

    Returns:
        ScalingResult: norms, fitted slope, predicted exponent and pass flag
    """
    radii = [float(R) for R in radii]
    if len(radii) < MIN_RADII:
        raise DomainError(f"need at least {MIN_RADII} radii, got {len(radii)}", "R")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise DomainError("radii must be strictly increasing", "R")
    d = len(recipe.center) + 1
    exponent = theorem_exponent(d, p, alpha)

    norms = []
    for R in radii:
        norm = norm_at_radius(recipe, weight_factory(R), p, R, spacing, threads)
        logger.debug("R=%g: weighted L^%g norm %.6g", R, p, norm)
        norms.append(norm)

    fit = fit_power_law(radii, norms, min_points=MIN_RADII)
    result = ScalingResult(radii, norms, fit.slope, fit.stderr, exponent)
    logger.info("scaling %s d=%d p=%g: slope %.4f vs exponent %s (%s)",
                recipe.name, d, p, fit.slope, exponent, "pass" if result.passed else "fail")
    return result
