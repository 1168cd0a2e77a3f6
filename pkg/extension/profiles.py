"""
Frequency Profile Module

Profiles f on the frequency ball B^{d-1} (and profiles g on the sphere S^{d-1}),
sampled at the nodes of a quadrature rule.

Key Features:
- Closed-form recipes: constant, bump, gaussian, cap indicator, random smooth, modulated
- Rules laid on the recipe's support ball: composite Gauss (default) or midpoint
- Uniform midpoint grids over [-1, 1]^{d-1} for wave-packet decompositions
- Linear combinations of profiles sharing the same nodes
- Discrete L^2 norms

Dependencies:
- numpy: For nodes, weights and values
- numerics.rng: For the seeded random-smooth recipe
- numerics.sphere: For sphere profiles
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from extension.quadrature import DEFAULT_ORDER, cube_midpoint, disk_gauss, interval_gauss
from numerics.errors import DomainError
from numerics.rng import STREAM_PROFILE, make_generator
from numerics.sphere import required_nodes, sphere_rule

logger = logging.getLogger(__name__)

RULES = ("gauss", "midpoint")


@dataclass(frozen=True)
class Recipe:
    """A closed-form profile with its support ball B(center, radius) inside B^{d-1}."""

    name: str
    function: Callable[[np.ndarray], np.ndarray]
    center: np.ndarray
    radius: float
    radial: Optional[Callable[[np.ndarray], np.ndarray]] = None
    params: Dict[str, Any] = field(default_factory=dict)

    def __call__(self, omega: np.ndarray) -> np.ndarray:
        return np.asarray(self.function(np.atleast_2d(omega)), dtype=complex)


@dataclass(frozen=True)
class FrequencyProfile:
    d: int
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    h_omega: float
    rule: str
    surface: str = "paraboloid"
    grid_shape: Optional[Tuple[int, ...]] = None
    recipe: Optional[Recipe] = None

    @property
    def size(self) -> int:
        return int(self.values.size)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(self.values) ** 2)))

    def integral(self) -> complex:
        return complex(np.sum(self.weights * self.values))

    def with_values(self, values) -> "FrequencyProfile":
        values = np.asarray(values, dtype=complex)
        if values.shape != self.values.shape:
            raise DomainError("replacement values must match the node count", "values")
        return replace(self, values=values, recipe=None)

    def grid_values(self) -> np.ndarray:
        """Values as an array over the uniform grid (midpoint profiles only)."""
        if self.grid_shape is None:
            raise DomainError("profile is not sampled on a uniform grid", "rule")
        return self.values.reshape(self.grid_shape)


def combine(a: complex, f: FrequencyProfile, b: complex, g: FrequencyProfile) -> FrequencyProfile:
    """a f + b g for profiles on identical nodes."""
    if f.nodes.shape != g.nodes.shape or not np.array_equal(f.nodes, g.nodes):
        raise DomainError("profiles must share their nodes to be combined", "nodes")
    return f.with_values(a * f.values + b * g.values)


def _unit_support(omega: np.ndarray) -> np.ndarray:
    return np.sum(omega**2, axis=1) <= 1.0 + 1e-12


def _check_cap(d: int, center, radius: float) -> np.ndarray:
    center = np.zeros(d - 1) if center is None else np.atleast_1d(np.asarray(center, dtype=float))
    if center.shape != (d - 1,):
        raise DomainError(f"cap center must have {d - 1} coordinates", "center")
    if radius <= 0 or np.linalg.norm(center) + radius > 1 + 1e-12:
        raise DomainError(f"cap B({center.tolist()}, {radius}) is not inside the unit ball", "radius")
    return center


def constant_recipe(d: int, value: complex = 1.0) -> Recipe:
    return Recipe(
        "constant",
        lambda w: np.where(_unit_support(w), value, 0.0),
        np.zeros(d - 1),
        1.0,
        radial=lambda r: np.where(r <= 1.0, value, 0.0) + 0j,
        params={"value": value},
    )


def bump_recipe(d: int, center=None, radius: float = 1.0) -> Recipe:
    """exp(1 - 1/(1 - t^2)) with t = |omega - center| / radius, zero for t >= 1."""
    center = _check_cap(d, center, radius)

    def profile_of_t(t):
        inside = t < 1.0
        out = np.zeros_like(t)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
        return out

    radial = (lambda r: profile_of_t(r / radius) + 0j) if not np.any(center) else None
    return Recipe(
        "bump",
        lambda w: profile_of_t(np.linalg.norm(w - center, axis=1) / radius),
        center,
        radius,
        radial=radial,
        params={"center": center.tolist(), "radius": radius},
    )


def gaussian_recipe(d: int, center=None, width: float = 0.25) -> Recipe:
    """exp(-|omega - center|^2 / (2 width^2)) cut to the unit ball."""
    center = np.zeros(d - 1) if center is None else np.atleast_1d(np.asarray(center, dtype=float))

    def function(w):
        return np.exp(-np.sum((w - center) ** 2, axis=1) / (2 * width**2)) * _unit_support(w)

    radial = (lambda r: np.exp(-(r**2) / (2 * width**2)) * (r <= 1.0) + 0j) if not np.any(center) else None
    return Recipe("gaussian", function, np.zeros(d - 1), 1.0, radial=radial,
                  params={"center": center.tolist(), "width": width})


def cap_recipe(d: int, center=None, radius: float = 0.25) -> Recipe:
    """Indicator of the cap B(center, radius)."""
    center = _check_cap(d, center, radius)
    return Recipe(
        "cap",
        lambda w: (np.linalg.norm(w - center, axis=1) <= radius).astype(float),
        center,
        radius,
        params={"center": center.tolist(), "radius": radius},
    )


def random_smooth_recipe(d: int, seed: int, terms: int = 6) -> Recipe:
    """
    Seeded sum of Gaussians with complex amplitudes, multiplied by the unit bump so that it
    vanishes smoothly at the boundary of B^{d-1}.
    """
    rng = make_generator(seed, STREAM_PROFILE)
    centers = rng.uniform(-0.6, 0.6, size=(terms, d - 1))
    widths = rng.uniform(0.1, 0.3, size=terms)
    amplitudes = rng.standard_normal(terms) + 1j * rng.standard_normal(terms)
    envelope = bump_recipe(d)

    def function(w):
        squared = np.sum((w[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        return np.exp(-squared / (2 * widths**2)) @ amplitudes * envelope.function(w)

    return Recipe("random-smooth", function, np.zeros(d - 1), 1.0, params={"seed": seed, "terms": terms})


def modulated_recipe(base: Recipe, shift) -> Recipe:
    """exp(i v . omega) f(omega): translates |Ef| by (-v, 0)."""
    shift = np.atleast_1d(np.asarray(shift, dtype=float))
    return Recipe(
        f"modulated-{base.name}",
        lambda w: np.exp(1j * (w @ shift)) * base(w),
        base.center,
        base.radius,
        params={**base.params, "shift": shift.tolist()},
    )


def linear_combination_recipe(a: complex, f: Recipe, b: complex, g: Recipe) -> Recipe:
    return Recipe(f"{f.name}+{g.name}", lambda w: a * f(w) + b * g(w), np.zeros(len(f.center)), 1.0)


RECIPES = {
    "constant": constant_recipe,
    "bump": bump_recipe,
    "gaussian": gaussian_recipe,
    "cap": cap_recipe,
    "random-smooth": random_smooth_recipe,
}


def make_profile(d: int, recipe: Recipe, h_omega: float, rule: str = "gauss", order: int = DEFAULT_ORDER) -> FrequencyProfile:
    """
    Sample a recipe on a rule of spacing h_omega.

    Gauss rules are laid on the recipe's support ball (interval for d = 2, polar disk for
    d = 3). Midpoint rules use the uniform grid over [-1, 1]^{d-1}.
    """
    if d not in (2, 3):
        raise DomainError(f"field evaluation is available for d = 2 and d = 3, got {d}", "d")
    if rule not in RULES:
        raise DomainError(f"unknown rule {rule!r}; expected one of {RULES}", "rule")
    grid_shape = None
    if rule == "midpoint":
        nodes, weights, grid_shape = cube_midpoint(d - 1, h_omega)
    elif d == 2:
        c, r = float(recipe.center[0]), recipe.radius
        x, weights = interval_gauss(c - r, c + r, h_omega, order)
        nodes = x[:, None]
    else:
        nodes, weights = disk_gauss(recipe.center, recipe.radius, h_omega, order)
    values = recipe(nodes)
    logger.debug("profile %s: %d nodes (%s rule, h=%g)", recipe.name, len(weights), rule, h_omega)
    return FrequencyProfile(d, nodes, weights, values, h_omega, rule, grid_shape=grid_shape, recipe=recipe)


def midpoint_profile(d: int, recipe: Recipe, h_omega: float) -> FrequencyProfile:
    return make_profile(d, recipe, h_omega, rule="midpoint")


def sphere_profile(d: int, nodes: int, function: Callable[[np.ndarray], np.ndarray] = None) -> FrequencyProfile:
    """g on S^{d-1} sampled on the sphere rule (g = 1 by default)."""
    rule = sphere_rule(d, nodes)
    values = np.ones(nodes, dtype=complex) if function is None else np.asarray(function(rule.nodes), dtype=complex)
    spacing = 2 * math.pi / nodes if d == 2 else math.sqrt(4 * math.pi / nodes)
    return FrequencyProfile(d, rule.nodes, rule.weights, values, spacing, "sphere", surface="sphere")


def sphere_nodes_for(radius: float) -> int:
    """Sphere node count resolving exp(i x . sigma) for |x| <= radius."""
    return required_nodes(radius, 2.0)
