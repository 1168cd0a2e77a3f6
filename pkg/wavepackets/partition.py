"""
Wave Packet Decomposition Module

Splits a profile sampled on the uniform midpoint grid of [-1, 1]^{d-1} into pieces f_{theta,nu}
localized to a frequency cap theta and to a spatial cell around nu, so that Ef_{theta,nu}
concentrates on the tube of the tile (theta, nu).

Key Features:
- C^infinity partitions of unity built by telescoping smooth steps, so the pieces sum to f
  exactly up to rounding
- Caps on the lattice R^(-1/2) Z^(d-1); translations on R^((1+delta)/2) Z^(d-1)
- Spatial localization on the periodic FFT grid of the zero-padded profile
- Lexicographic tile order in (cap index, translation index)
- Negligible pieces (L^2 mass below 1e-12 ||f||) dropped and reported
- Share of a piece's extension energy that stays inside its tube

Each window has support (1 + transition) lattice steps wide and equals 1 on a plateau
(1 - transition) steps wide, so every point lies in at most two windows per axis.

Dependencies:
- numpy: For windows and FFTs
- extension.operator: For the field of a piece over B_R
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from extension.operator import extend, field_grid
from extension.profiles import FrequencyProfile
from numerics.errors import DomainError
from wavepackets.tubes import Tile, Tube, tube_membership

logger = logging.getLogger(__name__)

MIN_R = 16.0
MIN_CAPS_PER_AXIS = 4
DEFAULT_TRANSITION = 0.5
DROP_FRACTION = 1e-12
TUBE_FIELD_SPACING = 2.0


def smooth_step(t) -> np.ndarray:
    """C^infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)

    def g(u):
        out = np.zeros_like(u)
        positive = u > 0
        out[positive] = np.exp(-1.0 / u[positive])
        return out

    a, b = g(t), g(1.0 - t)
    return a / (a + b)


def window(u, transition: float = DEFAULT_TRANSITION) -> np.ndarray:
    """S(u + 1/2) - S(u - 1/2) with S rising across [-transition/2, transition/2]."""
    u = np.asarray(u, dtype=float)
    return smooth_step((u + 0.5) / transition + 0.5) - smooth_step((u - 0.5) / transition + 0.5)


def _check_transition(transition: float):
    if not 0 < transition <= 1:
        raise DomainError(f"transition must lie in (0, 1], got {transition}", "transition")


def cap_partition(axis: np.ndarray, spacing: float, transition: float = DEFAULT_TRANSITION) -> Tuple[np.ndarray, np.ndarray]:
    """
    One-dimensional cap partition of unity on the frequency samples of an axis.

    Returns:
        (indices, weights): lattice indices j with a nonzero window and the array
        weights[j, i] = window(axis[i] / spacing - j); the columns sum to 1
    """
    _check_transition(transition)
    reach = int(math.ceil(np.max(np.abs(axis)) / spacing)) + 1
    indices = np.arange(-reach, reach + 1)
    weights = window(axis[None, :] / spacing - indices[:, None], transition)
    keep = np.any(weights > 0, axis=1)
    return indices[keep], weights[keep]


def spatial_partition(coords: np.ndarray, spacing: float, period: float,
                      transition: float = DEFAULT_TRANSITION) -> Tuple[np.ndarray, np.ndarray]:
    """
    One-dimensional partition of unity on a periodic coordinate by windows centered at k * spacing.

    Windows are evaluated at the wrapped distance to their center and normalized by their sum,
    which differs from 1 only near the seam of the period.
    """
    _check_transition(transition)
    reach = int(math.ceil(period / (2 * spacing)))
    indices = np.arange(-reach, reach + 1)
    offset = coords[None, :] - spacing * indices[:, None]
    wrapped = (offset + period / 2) % period - period / 2
    weights = window(wrapped / spacing, transition)
    total = weights.sum(axis=0)
    weights = weights / total[None, :]
    keep = np.any(weights > 0, axis=1)
    return indices[keep], weights[keep]


def _outer(factors: Sequence[np.ndarray]) -> np.ndarray:
    result = factors[0]
    for factor in factors[1:]:
        result = np.multiply.outer(result, factor)
    return result


@dataclass
class WavePacketDecomposition:
    R: float
    delta: float
    cap_spacing: float
    translation_spacing: float
    tiles: List[Tile]
    pieces: List[FrequencyProfile]
    f_norm: float
    dropped: int = 0
    dropped_mass: float = 0.0
    cap_indices: List[Tuple[int, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tiles)

    def __iter__(self) -> Iterator[Tuple[Tile, FrequencyProfile]]:
        return iter(zip(self.tiles, self.pieces))

    def masses(self) -> np.ndarray:
        return np.array([piece.l2_norm() for piece in self.pieces])

    def reconstruct(self) -> np.ndarray:
        if not self.pieces:
            return np.zeros(0, dtype=complex)
        return np.sum([piece.values for piece in self.pieces], axis=0)

    def dominant(self) -> Tuple[Tile, FrequencyProfile]:
        index = int(np.argmax(self.masses()))
        return self.tiles[index], self.pieces[index]


def subset_energy_ratio(pieces: Sequence[FrequencyProfile]) -> float:
    """||sum of pieces||^2 / sum ||piece||^2."""
    if not pieces:
        raise DomainError("need at least one piece", "pieces")
    total = np.sum([p.values for p in pieces], axis=0)
    weights = pieces[0].weights
    combined = float(np.sum(weights * np.abs(total) ** 2))
    separate = float(sum(p.l2_norm() ** 2 for p in pieces))
    return combined / separate


def cap_count(d: int, R: float) -> int:
    """Cap centers of the R^(-1/2) lattice inside the closed unit ball."""
    spacing = R**-0.5
    reach = int(math.floor(1.0 / spacing))
    axis = np.arange(-reach, reach + 1) * spacing
    grids = np.meshgrid(*([axis] * (d - 1)), indexing="ij")
    return int(np.sum(sum(g**2 for g in grids) <= 1.0 + 1e-12))


def translation_count(d: int, R: float, delta: float) -> int:
    """Translations of the R^((1+delta)/2) lattice inside the shadow |nu| <= R of B_R."""
    spacing = R ** ((1 + delta) / 2)
    reach = int(math.floor(R / spacing))
    axis = np.arange(-reach, reach + 1) * spacing
    grids = np.meshgrid(*([axis] * (d - 1)), indexing="ij")
    return int(np.sum(sum(g**2 for g in grids) <= R * R + 1e-9))


def decompose(
    f: FrequencyProfile,
    R: float,
    delta: float,
    transition: float = DEFAULT_TRANSITION,
    drop_fraction: float = DROP_FRACTION,
) -> WavePacketDecomposition:
    """
    Wave packet decomposition of a midpoint-sampled profile at scale R.

    Args:
        f: Profile on the uniform midpoint grid of [-1, 1]^{d-1}
        R: Scale, at least 16
        delta: Tube parameter; translations live on R^((1+delta)/2) Z^{d-1}
        transition: Relative width of the smooth transitions of every window
        drop_fraction: Pieces with L^2 norm below drop_fraction * ||f|| are dropped

    Returns:
        WavePacketDecomposition: tiles and pieces in lexicographic tile order

    Raises:
        DomainError: If f is not grid-sampled, R < 16, delta is not positive or the grid has
            fewer than four caps per axis
    """
    if f.grid_shape is None:
        raise DomainError("decompose needs a profile on the uniform midpoint grid", "rule")
    if R < MIN_R:
        raise DomainError(f"R must be at least {MIN_R}, got {R}", "R")
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}", "delta")
    d = f.d
    n = f.grid_shape[0]
    h = 2.0 / n
    axis = -1.0 + (np.arange(n) + 0.5) * h
    cap_spacing = R**-0.5
    translation_spacing = R ** ((1 + delta) / 2)

    cap_idx, cap_w = cap_partition(axis, cap_spacing, transition)
    if len(cap_idx) < MIN_CAPS_PER_AXIS:
        raise DomainError(f"only {len(cap_idx)} caps per axis at R={R}", "R")
    padded_n = 2 * n
    coords = 2 * np.pi * np.fft.fftfreq(padded_n, d=h)
    period = 2 * np.pi / h
    nu_idx, nu_w = spatial_partition(coords, translation_spacing, period, transition)

    values = f.grid_values()
    cell = h ** (d - 1)
    f_norm = f.l2_norm()
    threshold = drop_fraction * f_norm
    tiles: List[Tile] = []
    pieces: List[FrequencyProfile] = []
    dropped, dropped_mass = 0, 0.0
    used_caps = []
    original = tuple(slice(0, n) for _ in range(d - 1))

    for theta in itertools.product(range(len(cap_idx)), repeat=d - 1):
        psi = _outer([cap_w[i] for i in theta])
        f_theta = values * psi
        if not np.any(f_theta):
            continue
        theta_index = tuple(int(cap_idx[i]) for i in theta)
        used_caps.append(theta_index)
        padded = np.zeros((padded_n,) * (d - 1), dtype=complex)
        padded[original] = f_theta
        spatial = np.fft.ifftn(padded)
        for nu in itertools.product(range(len(nu_idx)), repeat=d - 1):
            chi = _outer([nu_w[k] for k in nu])
            localized = chi * spatial
            # Parseval bound on the piece before truncation
            if math.sqrt(padded_n ** (d - 1) * float(np.sum(np.abs(localized) ** 2)) * cell) < threshold:
                dropped += 1
                continue
            piece = np.fft.fftn(localized)[original]
            mass = math.sqrt(float(np.sum(np.abs(piece) ** 2)) * cell)
            if mass < threshold:
                dropped += 1
                dropped_mass += mass
                continue
            nu_index = tuple(int(nu_idx[k]) for k in nu)
            tiles.append(
                Tile(
                    theta_index,
                    nu_index,
                    np.asarray(theta_index, dtype=float) * cap_spacing,
                    np.asarray(nu_index, dtype=float) * translation_spacing,
                    float(R),
                    float(delta),
                )
            )
            pieces.append(f.with_values(piece.ravel()))

    logger.info("decomposed at R=%g delta=%g: %d tiles kept, %d dropped", R, delta, len(tiles), dropped)
    return WavePacketDecomposition(
        float(R), float(delta), cap_spacing, translation_spacing, tiles, pieces,
        f_norm, dropped, dropped_mass, used_caps,
    )


def compact_piece(piece: FrequencyProfile, relative: float = 1e-10) -> FrequencyProfile:
    """The piece restricted to nodes where |value| exceeds relative * max |value|."""
    magnitude = np.abs(piece.values)
    keep = magnitude > relative * magnitude.max() if magnitude.size else magnitude.astype(bool)
    return FrequencyProfile(
        piece.d, piece.nodes[keep], piece.weights[keep], piece.values[keep], piece.h_omega, piece.rule,
        surface=piece.surface,
    )


def tube_mass_fraction(tile: Tile, piece: FrequencyProfile, spacing: float = TUBE_FIELD_SPACING,
                       threads: int = 1) -> float:
    """
    Share of the grid-summed |Ef_{theta,nu}|^2 over B_R that falls inside the tube of the tile.

    The field is evaluated on the cell-centered grid of the given spacing, so the profile
    spacing must resolve |x| = R (h_omega <= 1/(4R)).

    Raises:
        ResolutionError: If the profile is too coarse for the ball
    """
    points = field_grid(tile.d, tile.R, spacing)
    values = extend(compact_piece(piece), points, threads=threads).values
    energy = np.abs(values) ** 2
    total = float(energy.sum())
    if total == 0.0:
        return 0.0
    inside = tube_membership(points, Tube.from_tile(tile))
    return float(energy[inside].sum()) / total
