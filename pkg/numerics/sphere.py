"""
Sphere Quadrature Module

Deterministic quadrature rules on the unit sphere S^{d-1} for d = 2 and d = 3,
with unnormalized surface-measure weights (total weight 2*pi on the circle and
4*pi on the 2-sphere).

Key Features:
- Trapezoid rule on the circle (spectrally accurate for smooth periodic integrands)
- Fibonacci point set with equal weights on the 2-sphere
- Node-count rule max(64, ceil(8 * R * diam)) for oscillatory integrands at radius R
- In-memory cache of built rules keyed by (d, n)

Dependencies:
- numpy: For node and weight arrays
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from numerics.errors import DomainError

logger = logging.getLogger(__name__)

MIN_NODES = 64
NODES_PER_PHASE = 8


@dataclass(frozen=True)
class SphereRule:
    d: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return int(self.weights.size)


def required_nodes(R: float, diam: float) -> int:
    """Smallest node count that resolves the oscillation of exp(i R sigma . x) over a set of diameter diam."""
    return max(MIN_NODES, int(math.ceil(NODES_PER_PHASE * R * diam)))


def sphere_rule(d: int, n: int) -> SphereRule:
    """
    Build the quadrature rule with n nodes on S^{d-1}.

    Args:
        d: Ambient dimension (2 or 3)
        n: Number of nodes

    Returns:
        SphereRule: unit nodes of shape (n, d) and surface weights summing to |S^{d-1}|

    Raises:
        DomainError: If d is not 2 or 3, or n < 1
    """
    if n < 1:
        raise DomainError(f"node count must be positive, got {n}", "n")
    if d == 2:
        angles = 2.0 * np.pi * np.arange(n) / n
        nodes = np.column_stack([np.cos(angles), np.sin(angles)])
        weights = np.full(n, 2.0 * np.pi / n)
    elif d == 3:
        # Fibonacci lattice: heights at cell midpoints, golden-angle longitudes
        k = np.arange(n) + 0.5
        z = 1.0 - 2.0 * k / n
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        phi = np.pi * (3.0 - math.sqrt(5.0)) * np.arange(n)
        nodes = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
        weights = np.full(n, 4.0 * np.pi / n)
    else:
        raise DomainError(f"sphere rules are available for d = 2 and d = 3, got d = {d}", "d")
    return SphereRule(d, nodes, weights)


class SphereRuleCache:
    """Keeps built rules so repeated sweeps over R do not rebuild them."""

    def __init__(self):
        self.cache: Dict[Tuple[int, int], SphereRule] = {}

    def get_rule(self, d: int, n: int) -> SphereRule:
        """
        Retrieves the rule with n nodes on S^{d-1}, building it on first use

        Args:
            d: Ambient dimension
            n: Node count

        Returns:
            SphereRule: The cached rule
        """
        key = (d, n)
        if key not in self.cache:
            logger.debug("building sphere rule d=%d n=%d", d, n)
            self.cache[key] = sphere_rule(d, n)
        return self.cache[key]

    def get_rules(self, d: int, counts: list[int]) -> Dict[int, SphereRule]:
        """Retrieves rules for several node counts at once."""
        return {n: self.get_rule(d, n) for n in counts}


default_cache = SphereRuleCache()


def surface_area(d: int) -> float:
    """Surface measure of S^{d-1}."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
