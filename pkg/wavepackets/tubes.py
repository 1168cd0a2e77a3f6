"""
Tiles and tubes.

A tile (theta, nu) pairs a frequency cap of radius ~R^(-1/2) centered at omega_theta with a
translation nu on the lattice R^((1+delta)/2) Z^(d-1). Its tube is
    {x in B_R : |x' + 2 x_d omega_theta - nu| <= R^(1/2 + delta)},
pointing along G(theta) = (-2 omega_theta, 1) / |(-2 omega_theta, 1)|.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np


def create_tile_key(theta_index: Sequence[int], nu_index: Sequence[int]) -> str:
    """
    Creates a tile key in the format cap[i,j].nu[k,l]

    Example:
        >>> create_tile_key((3,), (-1,))
        'cap[3].nu[-1]'
    """
    caps = ",".join(str(int(i)) for i in theta_index)
    shifts = ",".join(str(int(k)) for k in nu_index)
    return f"cap[{caps}].nu[{shifts}]"


def direction(omega) -> np.ndarray:
    """G = (-2 omega, 1) / |(-2 omega, 1)|; accepts one cap center or a stack of them."""
    omega = np.asarray(omega, dtype=float)
    lifted = np.concatenate([-2.0 * omega, np.ones(omega.shape[:-1] + (1,))], axis=-1)
    return lifted / np.linalg.norm(lifted, axis=-1, keepdims=True)


@dataclass(frozen=True)
class Tile:
    theta_index: Tuple[int, ...]
    nu_index: Tuple[int, ...]
    omega: np.ndarray
    nu: np.ndarray
    R: float
    delta: float

    @property
    def key(self) -> str:
        return create_tile_key(self.theta_index, self.nu_index)

    @property
    def d(self) -> int:
        return len(self.omega) + 1

    def sort_key(self):
        return (self.theta_index, self.nu_index)


@dataclass(frozen=True)
class Tube:
    tile: Tile
    direction: np.ndarray
    radius: float
    length: float

    @classmethod
    def from_tile(cls, tile: Tile) -> "Tube":
        return cls(tile, direction(tile.omega), tile.R ** (0.5 + tile.delta), float(tile.R))

    def core_point(self, t) -> np.ndarray:
        """Points (nu - 2 t omega, t) of the central line."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.column_stack([self.tile.nu[None, :] - 2.0 * t[:, None] * self.tile.omega[None, :], t])

    def core_segment(self) -> Optional[Tuple[float, float]]:
        """Parameter range of the central line inside B_R, or None if the line misses B_R."""
        omega, nu = self.tile.omega, self.tile.nu
        a = 1.0 + 4.0 * float(omega @ omega)
        b = -4.0 * float(nu @ omega)
        c = float(nu @ nu) - self.length**2
        disc = b * b - 4 * a * c
        if disc < 0:
            return None
        root = math.sqrt(disc)
        return (-b - root) / (2 * a), (-b + root) / (2 * a)


def tube_membership(points, tube: Tube) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    offset = points[:, :-1] + 2.0 * points[:, -1:] * tube.tile.omega[None, :] - tube.tile.nu[None, :]
    in_tube = np.linalg.norm(offset, axis=1) <= tube.radius
    in_ball = np.linalg.norm(points, axis=1) <= tube.length
    return in_tube & in_ball
