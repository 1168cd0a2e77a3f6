"""
Fourier Decay Module

Fourier transforms of atomic measures, their L^2 averages over spheres of radius R,
and log-log fits of the decay exponent.

Key Features:
- mu^(xi) = sum_j m_j exp(-i xi . x_j), vectorized over frequencies
- Spherical averages int_{S^{d-1}} |mu^(R sigma)|^2 dsigma with resolution-checked rules
- Decay fits over a geometric R grid, evaluated in parallel in a fixed order

Dependencies:
- numpy: For the exponential sums
- concurrent.futures: For the parallel R sweep
- numerics.sphere: For the sphere quadrature rules
- numerics.fitting: For the log-log regression
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from fractal.measures import FractalMeasure, valid_radius_max
from numerics.errors import DomainError, ResolutionError
from numerics.fitting import fit_power_law
from numerics.sphere import SphereRuleCache, default_cache, required_nodes

logger = logging.getLogger(__name__)

# atoms * nodes per chunk of the exponential sum
CHUNK_ENTRIES = 1 << 22
MIN_NODES_3D = 2048


def fourier(mu: FractalMeasure, xi) -> np.ndarray:
    """
    Fourier transform of the atomic measure at one frequency (shape (d,)) or many (shape (k, d)).

    Example:
        >>> from fractal.measures import atomic_measure
        >>> mu = atomic_measure([[0.0, 0.0], [1.0, 0.0]], [0.5, 0.5], 0.0)
        >>> abs(fourier(mu, [np.pi, 0.0])) < 1e-15
        True
    """
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 1
    xi = np.atleast_2d(xi)
    if xi.shape[1] != mu.d:
        raise DomainError(f"frequency dimension {xi.shape[1]} does not match d={mu.d}", "xi")
    values = np.exp(-1j * (mu.atoms @ xi.T)).T @ mu.masses
    return values[0] if single else values


def default_node_count(d: int, R: float, diam: float) -> int:
    needed = required_nodes(R, diam)
    return needed if d == 2 else max(MIN_NODES_3D, 4 * needed)


def spherical_average(
    mu: FractalMeasure,
    R: float,
    nodes: Optional[int] = None,
    cache: SphereRuleCache = default_cache,
) -> float:
    """
    Quadrature estimate of int_{S^{d-1}} |mu^(R sigma)|^2 dsigma (unnormalized surface measure).

    Args:
        mu: Atomic measure in d = 2 or d = 3
        R: Radius, R > 0
        nodes: Number of sphere nodes; defaults to the resolution rule (times 4 on the 2-sphere)
        cache: Rule cache

    Returns:
        float: The spherical average

    Raises:
        ResolutionError: If nodes < max(64, ceil(8 R diam))
    """
    if R <= 0:
        raise DomainError(f"R must be positive, got {R}", "R")
    needed = required_nodes(R, mu.diameter)
    if nodes is None:
        nodes = default_node_count(mu.d, R, mu.diameter)
    elif nodes < needed:
        raise ResolutionError(f"{nodes} sphere nodes cannot resolve R={R}: need at least {needed}", "quad_nodes")

    rule = cache.get_rule(mu.d, nodes)
    chunk = max(1, CHUNK_ENTRIES // max(1, mu.size))
    total = 0.0
    for start in range(0, rule.size, chunk):
        block = rule.nodes[start:start + chunk]
        transform = np.exp(-1j * R * (mu.atoms @ block.T)).T @ mu.masses
        total += float(np.dot(rule.weights[start:start + chunk], np.abs(transform) ** 2))
    return total


@dataclass
class DecayFit:
    radii: np.ndarray
    averages: np.ndarray
    fitted_beta: float
    stderr: float

    def rows(self) -> List[dict]:
        return [
            {"R": float(R), "average": float(a), "log_R": float(np.log(R)), "log_average": float(np.log(a))}
            for R, a in zip(self.radii, self.averages)
        ]


def decay_fit(
    mu: FractalMeasure,
    R_min: float,
    R_max: float,
    count: int,
    nodes: Optional[int] = None,
    threads: int = 1,
    cache: SphereRuleCache = default_cache,
) -> DecayFit:
    """
    Fit beta in int |mu^(R sigma)|^2 dsigma ~ R^(-beta) over a geometric R grid.

    R_max may not exceed 0.5 / atom_scale: beyond it the atomic approximation stops decaying.
    """
    if count < 4:
        raise DomainError(f"decay fits need at least 4 radii, got {count}", "count")
    if not 0 < R_min < R_max:
        raise DomainError(f"need 0 < R_min < R_max, got {R_min}, {R_max}", "R_min")
    limit = valid_radius_max(mu)
    if limit is not None and R_max > limit:
        raise DomainError(f"R_max={R_max} exceeds the valid range {limit:.6g} of this depth", "R_max")

    radii = np.geomspace(R_min, R_max, count)
    if nodes is None or nodes >= required_nodes(R_max, mu.diameter):
        # build every rule before the workers start
        cache.get_rules(mu.d, sorted({nodes or default_node_count(mu.d, R, mu.diameter) for R in radii}))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        averages = np.array(list(pool.map(lambda R: spherical_average(mu, R, nodes, cache), radii)))

    fit = fit_power_law(radii, averages, min_points=4)
    logger.info("decay fit over R in [%g, %g]: beta=%.4f (stderr %.4f)", R_min, R_max, -fit.slope, fit.stderr)
    return DecayFit(radii, averages, -fit.slope, fit.stderr)
