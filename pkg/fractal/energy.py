"""
Frostman, energy and Mattila-integral computations for atomic measures.

Balls are open. Energies exclude the diagonal: every atomic approximation has an
infinite diagonal term, and the off-diagonal sum converges to the energy of the
limit measure as the depth grows.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from fractal.fourier import spherical_average
from fractal.measures import FractalMeasure, valid_radius_max
from numerics.errors import DomainError
from weights.certificate import FrostmanCertificate, certificate_from_masses

logger = logging.getLogger(__name__)

ENERGY_BLOCK = 2048
PANEL_ORDER = 8


def ball_masses(mu: FractalMeasure, radii: Sequence[float], centers: np.ndarray) -> np.ndarray:
    """mu(B(center, r)) for open balls, shape (len(radii), len(centers))."""
    tree = cKDTree(mu.atoms)
    uniform = np.allclose(mu.masses, mu.masses[0])
    masses = np.empty((len(radii), len(centers)))
    for i, r in enumerate(radii):
        open_radius = np.nextafter(r, 0.0)
        if uniform:
            masses[i] = tree.query_ball_point(centers, open_radius, return_length=True) * mu.masses[0]
        else:
            hits = tree.query_ball_point(centers, open_radius)
            masses[i] = [mu.masses[idx].sum() for idx in hits]
    return masses


def frostman_check(
    mu: FractalMeasure,
    radii: Sequence[float],
    centers: Optional[np.ndarray] = None,
    alpha: Optional[float] = None,
    constant: float = 4.0,
) -> FrostmanCertificate:
    """
    Empirical Frostman constant max mu(B(x, r)) / r^alpha over the sampled balls.

    Args:
        mu: Atomic measure
        radii: Positive radii (no lower cutoff)
        centers: Ball centers; defaults to the atoms
        alpha: Exponent; defaults to the measure's claimed_alpha
        constant: Declared constant C the certificate is checked against

    Returns:
        FrostmanCertificate: worst ratio and pass flag
    """
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii):
        raise DomainError("Frostman radii must be positive", "radii")
    alpha = mu.claimed_alpha if alpha is None else float(alpha)
    centers = mu.atoms if centers is None else np.atleast_2d(np.asarray(centers, dtype=float))
    certificate = certificate_from_masses(alpha, constant, radii, centers, ball_masses(mu, radii, centers))
    logger.debug("frostman check alpha=%.4f: worst ratio %.4f over %d balls",
                 alpha, certificate.worst_ratio, len(radii) * len(centers))
    return certificate


def energy(mu: FractalMeasure, alpha: float) -> float:
    """
    Off-diagonal alpha-energy sum_{i != j} m_i m_j |x_i - x_j|^(-alpha).

    Example:
        >>> from fractal.measures import atomic_measure
        >>> energy(atomic_measure([[0.0], [1.0]], [0.5, 0.5], 0.0), 0.7)
        0.5
    """
    if alpha <= 0:
        raise DomainError(f"energy exponent must be positive, got {alpha}", "alpha")
    total = 0.0
    n = mu.size
    for start in range(0, n, ENERGY_BLOCK):
        rows = slice(start, min(n, start + ENERGY_BLOCK))
        for other in range(0, n, ENERGY_BLOCK):
            cols = slice(other, min(n, other + ENERGY_BLOCK))
            distances = cdist(mu.atoms[rows], mu.atoms[cols])
            with np.errstate(divide="ignore"):
                kernel = np.where(distances > 0, distances, np.inf) ** (-alpha)
            if start == other:
                np.fill_diagonal(kernel, 0.0)
            total += float(mu.masses[rows] @ kernel @ mu.masses[cols])
    return total


@dataclass(frozen=True)
class MattilaIntegral:
    value: float
    energy: float
    R_max: float

    @property
    def ratio(self) -> Optional[float]:
        return self.value / self.energy if self.energy > 0 else None


def mattila_integral(mu: FractalMeasure, alpha: float, R_max: float, nodes: Optional[int] = None) -> MattilaIntegral:
    """
    int_1^{R_max} (int_{S^{d-1}} |mu^(R sigma)|^2 dsigma)^2 R^(d-1) dR, alongside the alpha-energy.

    The R-integral uses Gauss-Legendre panels of width 1/ceil(max(1, diam)) anchored at R = 1,
    so integer values of R_max end on a panel boundary.
    """
    if R_max < 1:
        raise DomainError(f"R_max must be at least 1, got {R_max}", "R_max")
    limit = valid_radius_max(mu)
    if limit is not None and R_max > limit:
        raise DomainError(f"R_max={R_max} exceeds the valid range {limit:.6g} of this depth", "R_max")
    per_unit = math.ceil(max(1.0, mu.diameter))
    points, weights = np.polynomial.legendre.leggauss(PANEL_ORDER)

    value = 0.0
    panel = 0
    left = 1.0
    while left < R_max:
        right = min(R_max, 1.0 + (panel + 1) / per_unit)
        half = 0.5 * (right - left)
        for x, w in zip(points, weights):
            R = left + half * (x + 1.0)
            average = spherical_average(mu, R, nodes)
            value += half * w * average**2 * R ** (mu.d - 1)
        panel += 1
        left = right

    energy_value = energy(mu, alpha) if mu.size > 1 else 0.0
    logger.info("mattila integral up to R=%g: %.6g (energy %.6g)", R_max, value, energy_value)
    return MattilaIntegral(value, energy_value, R_max)
