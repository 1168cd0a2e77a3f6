"""
Sampled ball-growth certificates.

A certificate records, over a finite list of (center, radius) pairs, the largest
ratio mass(B(center, radius)) / radius^alpha and whether it stays below the declared
constant. It is a sampled certificate: balls that were not tested are not covered.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np


@dataclass
class FrostmanCertificate:
    alpha: float
    constant: float
    radii: List[float]
    centers: np.ndarray
    worst_ratio: float
    worst_center: Optional[List[float]] = None
    worst_radius: Optional[float] = None

    @property
    def passed(self) -> bool:
        return bool(self.worst_ratio <= self.constant)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": float(self.alpha),
            "constant": float(self.constant),
            "radii": [float(r) for r in self.radii],
            "center_count": int(len(self.centers)),
            "worst_ratio": float(self.worst_ratio),
            "worst_center": self.worst_center,
            "worst_radius": self.worst_radius,
            "sampled": True,
            "pass": self.passed,
        }


def certificate_from_masses(alpha: float, constant: float, radii, centers: np.ndarray, masses: np.ndarray) -> FrostmanCertificate:
    """
    Build a certificate from a (len(radii), len(centers)) array of ball masses.
    """
    radii = [float(r) for r in radii]
    centers = np.asarray(centers, dtype=float)
    if masses.size == 0:
        return FrostmanCertificate(alpha, constant, radii, centers, 0.0)
    ratios = masses / np.power(np.asarray(radii), alpha)[:, None]
    i, j = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    return FrostmanCertificate(
        alpha=alpha,
        constant=constant,
        radii=radii,
        centers=centers,
        worst_ratio=float(ratios[i, j]),
        worst_center=[float(c) for c in centers[j]],
        worst_radius=radii[i],
    )
