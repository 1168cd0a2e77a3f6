"""
Parabolic rescaling of frequency profiles.

A profile supported in the cap B(omega0, 1/K) is carried to a profile on the whole ball by
g(xi) = K^(-(d-1)/2) f(omega0 + xi/K), and the extensions are related through the affine map
T(x) = (x'/K + 2 x_d omega0 / K, x_d / K^2):

    |Ef(x)| = K^(-(d-1)/2) |Eg(T x)|,    ||g||_2 = ||f||_2.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from extension.profiles import FrequencyProfile, Recipe, make_profile
from numerics.errors import DomainError

logger = logging.getLogger(__name__)

SUPPORT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x (the rescaling map has no translation part)."""

    matrix: np.ndarray
    omega0: np.ndarray
    K: float

    def apply(self, points) -> np.ndarray:
        return np.atleast_2d(np.asarray(points, dtype=float)) @ self.matrix.T


def rescaling_map(omega0, K: float) -> AffineMap:
    omega0 = np.atleast_1d(np.asarray(omega0, dtype=float))
    dim = omega0.size + 1
    matrix = np.zeros((dim, dim))
    matrix[:-1, :-1] = np.eye(dim - 1) / K
    matrix[:-1, -1] = 2 * omega0 / K
    matrix[-1, -1] = 1 / K**2
    return AffineMap(matrix, omega0, float(K))


def parabolic_rescale(
    f: FrequencyProfile, omega0, K: float, h_omega: Optional[float] = None
) -> Tuple[FrequencyProfile, AffineMap]:
    """
    Rescale a cap-supported profile to the unit ball.

    Args:
        f: Profile built from a recipe whose support lies in B(omega0, 1/K)
        omega0: Cap center
        K: Rescaling factor, K >= 2
        h_omega: Rule spacing for g; defaults to K h_f / (1 + 2|omega0|), which keeps g
            rule-compliant at T x whenever f is rule-compliant at x

    Returns:
        (g, T): the rescaled profile and the map T

    Raises:
        DomainError: If K < 2, the cap leaves B^{d-1}, or f is not supported in the cap
    """
    omega0 = np.atleast_1d(np.asarray(omega0, dtype=float))
    d = f.d
    if K < 2:
        raise DomainError(f"K must be at least 2, got {K}", "K")
    if omega0.shape != (d - 1,):
        raise DomainError(f"omega0 must have {d - 1} coordinates", "omega0")
    if np.linalg.norm(omega0) + 1 / K > 1 + SUPPORT_TOLERANCE:
        raise DomainError(f"cap B({omega0.tolist()}, 1/{K}) leaves the unit ball", "omega0")
    recipe = f.recipe
    if recipe is None:
        raise DomainError("parabolic_rescale needs a profile built from a recipe", "recipe")
    if np.linalg.norm(recipe.center - omega0) + recipe.radius > 1 / K + SUPPORT_TOLERANCE:
        raise DomainError(
            f"support B({recipe.center.tolist()}, {recipe.radius}) is not inside B({omega0.tolist()}, 1/{K})", "support"
        )

    amplitude = K ** (-(d - 1) / 2)

    def rescaled(xi):
        return amplitude * recipe(omega0 + xi / K)

    g_recipe = Recipe(
        f"rescaled-{recipe.name}",
        rescaled,
        (recipe.center - omega0) * K,
        recipe.radius * K,
        params={"base": recipe.name, "omega0": omega0.tolist(), "K": K},
    )
    h = h_omega if h_omega is not None else K * f.h_omega / (1 + 2 * float(np.linalg.norm(omega0)))
    g = make_profile(d, g_recipe, h, rule=f.rule)
    logger.debug("rescaled %s by K=%g about %s (h_g=%g)", recipe.name, K, omega0, h)
    return g, rescaling_map(omega0, K)


def rescaling_gap(f: FrequencyProfile, g: FrequencyProfile, T: AffineMap, points, extend) -> float:
    """max | |Ef(x)| - K^(-(d-1)/2) |Eg(T x)| | over the points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    lhs = np.abs(extend(f, points).values)
    rhs = T.K ** (-(f.d - 1) / 2) * np.abs(extend(g, T.apply(points)).values)
    return float(np.max(np.abs(lhs - rhs))) if len(points) else 0.0
