"""
Broad Norm Module

The broad norm of Ef over B_R at scale K: split f into sharp caps tau of side 1/K, tile B_R by
cubes of side K^2 (clipped to B_R), and on every cube discard the caps whose directions G(tau)
lie within angle 1/K of one of A lines chosen to make the largest remaining contribution as
small as possible:

    BL^p_A(Ef)^p = sum_cubes min_{V_1..V_A} max_{tau not captured} int_cube |Ef_tau|^p H.

Key Features:
- Candidate lines from a deterministic direction net of spacing at most 1/(10K)
- Lines with identical capture sets are merged before the A-tuples are enumerated
- Enumeration budget of 10^6 tuples

Dependencies:
- numpy: For per-cube integrals
- extension.operator: For the fields of the cap pieces
"""

import itertools
import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from extension.operator import FIELD_SPACING, extend, field_grid
from extension.profiles import FrequencyProfile
from numerics.errors import BudgetError, DomainError
from wavepackets.tubes import direction
from weights.sampled import SampledWeight

logger = logging.getLogger(__name__)

MAX_COMBINATIONS = 1_000_000
NET_FACTOR = 10


def direction_net(d: int, spacing: float) -> np.ndarray:
    """Unit vectors on the closed upper half-sphere of R^d, neighbors at most `spacing` apart."""
    if spacing <= 0:
        raise DomainError(f"net spacing must be positive, got {spacing}", "spacing")
    if d == 2:
        count = math.ceil(math.pi / spacing)
        phi = math.pi * np.arange(count) / count
        return np.column_stack([np.cos(phi), np.sin(phi)])
    if d == 3:
        rings = math.ceil((math.pi / 2) / spacing)
        vectors = []
        for i in range(rings + 1):
            polar = (math.pi / 2) * i / rings
            around = max(1, math.ceil(2 * math.pi * math.sin(polar) / spacing))
            azimuth = 2 * math.pi * np.arange(around) / around
            vectors.append(np.column_stack([
                math.sin(polar) * np.cos(azimuth),
                math.sin(polar) * np.sin(azimuth),
                np.full(around, math.cos(polar)),
            ]))
        return np.vstack(vectors)
    raise DomainError(f"direction nets are available for d = 2 and d = 3, got {d}", "d")


def sharp_caps(f: FrequencyProfile, K: int) -> Dict[Tuple[int, ...], FrequencyProfile]:
    """Restrictions of f to the cells [j/K - 1/(2K), j/K + 1/(2K)) of the 1/K lattice, by index j."""
    index = np.floor(f.nodes * K + 0.5).astype(int)
    caps = {}
    for key in sorted(set(map(tuple, index))):
        mask = np.all(index == np.asarray(key), axis=1)
        caps[key] = replace(
            f, nodes=f.nodes[mask], weights=f.weights[mask], values=f.values[mask], grid_shape=None, recipe=None
        )
    return caps


@dataclass(frozen=True)
class BroadNormResult:
    value: float
    full: float
    cubes: int
    caps: int
    combinations: int
    p: float

    def to_dict(self) -> Dict[str, float]:
        return {"broad_norm": self.value, "full_norm": self.full, "cubes": self.cubes,
                "caps": self.caps, "combinations": self.combinations, "p": self.p}


def cap_integrals(
    f: FrequencyProfile, R: float, K: int, p: float, weight: SampledWeight,
    spacing: float = FIELD_SPACING, threads: int = 1,
) -> Tuple[List[Tuple[int, ...]], np.ndarray, int]:
    """
    int_cube |Ef_tau|^p H over every cap tau and every K^2-cube of B_R.

    Returns:
        (cap indices, integrals of shape (caps, cubes), cube count)
    """
    points = field_grid(f.d, R, spacing)
    H = weight.value_at(points)
    cube_index = np.floor((points + R) / (K * K)).astype(int)
    _, cube_of = np.unique(cube_index, axis=0, return_inverse=True)
    cube_of = np.asarray(cube_of).ravel()
    cubes = int(cube_of.max()) + 1 if len(cube_of) else 0
    caps = sharp_caps(f, K)
    keys = list(caps)
    integrals = np.zeros((len(keys), cubes))
    cell = spacing**f.d
    for row, key in enumerate(keys):
        field = extend(caps[key], points, threads=threads)
        integrals[row] = np.bincount(cube_of, weights=np.abs(field.values) ** p * H * cell, minlength=cubes)
    return keys, integrals, cubes


def broad_norm(
    f: FrequencyProfile,
    R: float,
    K: int,
    A: int,
    p: float,
    weight: SampledWeight,
    net_spacing: Optional[float] = None,
    spacing: float = FIELD_SPACING,
    threads: int = 1,
) -> BroadNormResult:
    """
    Broad norm BL^p_A of Ef over B_R against the weight H.

    Args:
        f: Frequency profile, rule-compliant on B_R
        R: Radius of the evaluation ball
        K: Cap scale (caps of side 1/K, cubes of side K^2), K >= 2
        A: Number of lines, A >= 1
        p: Lebesgue exponent, p >= 1
        weight: Weight H
        net_spacing: Direction-net spacing, at most 1/(10K)
        spacing: Evaluation grid spacing in x
        threads: Worker threads for the field evaluations

    Returns:
        BroadNormResult: the broad norm and the full norm (sum over caps of the weighted integrals)^(1/p)

    Raises:
        BudgetError: If more than 10^6 A-tuples of lines would be enumerated
    """
    if K < 2 or int(K) != K:
        raise DomainError(f"K must be an integer >= 2, got {K}", "K")
    if A < 1 or int(A) != A:
        raise DomainError(f"A must be a positive integer, got {A}", "A")
    if p < 1:
        raise DomainError(f"p must be at least 1, got {p}", "p")
    K, A = int(K), int(A)
    net_spacing = net_spacing if net_spacing is not None else 1.0 / (NET_FACTOR * K)
    if net_spacing > 1.0 / (NET_FACTOR * K):
        raise DomainError(f"net spacing {net_spacing} exceeds 1/(10K)", "net_spacing")

    keys, integrals, cubes = cap_integrals(f, R, K, p, weight, spacing, threads)
    full = float(integrals.sum()) ** (1.0 / p)
    if not keys or cubes == 0:
        return BroadNormResult(0.0, full, cubes, len(keys), 0, p)

    net = direction_net(f.d, net_spacing)
    G = direction(np.asarray(keys, dtype=float) / K)
    captured = np.abs(net @ G.T) >= math.cos(1.0 / K)
    masks = np.unique(captured, axis=0)
    total = math.comb(len(masks) + A - 1, A)
    if total > MAX_COMBINATIONS:
        raise BudgetError(f"{total} line tuples exceed {MAX_COMBINATIONS}", "A")

    best = np.full(cubes, np.inf)
    for combo in itertools.combinations_with_replacement(range(len(masks)), A):
        allowed = ~np.any(masks[list(combo)], axis=0)
        worst = integrals[allowed].max(axis=0) if np.any(allowed) else np.zeros(cubes)
        np.minimum(best, worst, out=best)

    value = float(best.sum()) ** (1.0 / p)
    logger.info("broad norm R=%g K=%d A=%d p=%g: %.6g (full %.6g, %d cubes, %d tuples)",
                R, K, A, p, value, full, cubes, total)
    return BroadNormResult(value, full, cubes, len(keys), total, p)
