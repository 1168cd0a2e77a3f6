"""
Ball-growth verification of sampled weights.

verify_weight checks int_{B(x, r)} H <= C r^alpha on a finite set of balls with
r >= 1, counting every grid cell whose center lies strictly inside the ball.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from numerics.errors import DomainError, ResolutionError
from weights.certificate import FrostmanCertificate, certificate_from_masses
from weights.sampled import SampledWeight

logger = logging.getLogger(__name__)

DEFAULT_RADII = (1.0, 2.0, 4.0, 8.0, 16.0)
MAX_ANCHORS = 64


def ball_mass(weight: SampledWeight, center: np.ndarray, radius: float) -> float:
    axes = weight.axes()
    windows = []
    for k, axis in enumerate(axes):
        idx = np.nonzero(np.abs(axis - center[k]) < radius)[0]
        if idx.size == 0:
            return 0.0
        windows.append(slice(idx[0], idx[-1] + 1))
    squared = sum(
        np.reshape((axes[k][windows[k]] - center[k]) ** 2, [-1 if j == k else 1 for j in range(weight.d)])
        for k in range(weight.d)
    )
    block = weight.values[tuple(windows)]
    return float(block[squared < radius * radius].sum() * weight.cell_volume)


def default_centers(weight: SampledWeight, per_axis: int = 5) -> np.ndarray:
    """A coarse lattice over the box plus up to 64 anchor points recorded by the weight's recipe."""
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in zip(weight.lower, weight.upper)]
    grids = np.meshgrid(*axes, indexing="ij")
    lattice = np.stack([g.ravel() for g in grids], axis=1)
    anchors = np.asarray(weight.metadata.get("anchors", np.empty((0, weight.d))), dtype=float)
    if len(anchors) > MAX_ANCHORS:
        anchors = anchors[np.linspace(0, len(anchors) - 1, MAX_ANCHORS).astype(int)]
    return np.vstack([lattice, anchors.reshape(-1, weight.d)])


def verify_weight(
    weight: SampledWeight,
    alpha: float,
    constant: float,
    radii: Sequence[float] = DEFAULT_RADII,
    centers: Optional[np.ndarray] = None,
    threads: int = 1,
) -> FrostmanCertificate:
    """
    Sampled certificate for the ball-growth condition of a weight.

    Args:
        weight: Sampled weight
        alpha: Growth exponent
        constant: Declared constant C
        radii: Ball radii, all at least 1
        centers: Ball centers inside the box enlarged by the largest radius; defaults to
            default_centers(weight)
        threads: Worker threads for the (center, radius) loop

    Returns:
        FrostmanCertificate: worst mass / r^alpha and the pass flag

    Raises:
        DomainError: If a radius is below 1 or a center lies outside the enlarged box
        ResolutionError: If the spacing exceeds r/8 for the smallest radius
    """
    radii = [float(r) for r in radii]
    if not radii or min(radii) < 1:
        raise DomainError("certification radii must all be at least 1", "radii")
    if weight.spacing > min(radii) / 8:
        raise ResolutionError(
            f"grid spacing {weight.spacing} is too coarse for radius {min(radii)} (need h <= r/8)", "spacing"
        )
    centers = default_centers(weight) if centers is None else np.atleast_2d(np.asarray(centers, dtype=float))
    reach = max(radii)
    if np.any(centers < weight.lower - reach) or np.any(centers > weight.upper + reach):
        raise DomainError("certification centers must lie within the box enlarged by the largest radius", "centers")

    def masses_for(center):
        return [ball_mass(weight, center, r) for r in radii]

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        per_center = list(pool.map(masses_for, centers))
    masses = np.asarray(per_center, dtype=float).T.reshape(len(radii), len(centers))
    certificate = certificate_from_masses(alpha, constant, radii, centers, masses)
    logger.info("weight certificate alpha=%g C=%g: worst ratio %.4f (%s)",
                alpha, constant, certificate.worst_ratio, "pass" if certificate.passed else "fail")
    return certificate
