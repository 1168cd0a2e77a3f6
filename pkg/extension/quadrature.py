"""
Quadrature rules on intervals and disks in frequency space.

All rules take a spacing h: Gauss panels have width at most h, midpoint cells have
width h, and polar rules keep both the radial panel width and the outer arc spacing
below h. The phase-resolution rule of the extension operator is stated in terms of h.
"""

import math
from typing import Tuple

import numpy as np

from numerics.errors import DomainError

DEFAULT_ORDER = 6


def interval_gauss(a: float, b: float, h: float, order: int = DEFAULT_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [a, b] with panels of width at most h."""
    if b <= a or h <= 0:
        raise DomainError(f"bad interval [{a}, {b}] or spacing {h}", "h_omega")
    panels = max(1, math.ceil((b - a) / h - 1e-9))
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def disk_gauss(center, radius: float, h: float, order: int = DEFAULT_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """Polar rule on the disk B(center, radius): radial Gauss panels, trapezoid in angle."""
    r, wr = interval_gauss(0.0, radius, h, order)
    angles = max(16, math.ceil(2 * math.pi * radius / h))
    theta = 2 * math.pi * np.arange(angles) / angles
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    nodes = np.column_stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()]) + np.asarray(center, float)
    weights = (wr[:, None] * r[:, None] * np.full(angles, 2 * math.pi / angles)[None, :]).ravel()
    return nodes, weights


def cube_midpoint(dim: int, h: float) -> Tuple[np.ndarray, np.ndarray, Tuple[int, ...]]:
    """Cell centers of the uniform grid of spacing h over [-1, 1]^dim, row-major."""
    cells = int(round(2.0 / h))
    axis = -1.0 + (np.arange(cells) + 0.5) * (2.0 / cells)
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    return nodes, np.full(len(nodes), (2.0 / cells) ** dim), (cells,) * dim
