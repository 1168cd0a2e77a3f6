"""
Varieties, tangency and concentration.

A variety Z is the common zero set of polynomials P_1, ..., P_k with rational coefficients in
R^d. It is a transverse complete intersection at z when the gradients are independent there,
i.e. when the wedge |grad P_1 ^ ... ^ grad P_k| = sqrt(det(J J^T)) does not vanish.

A tube T is tangent to Z at scale E when T is contained in the E R^(1/2)-neighborhood of Z and
its direction makes an angle at most E R^(-1/2) with the tangent space of Z at nearby
nonsingular zeros. Both conditions are checked on samples: points of the central line are
projected onto Z by Gauss-Newton steps x <- x - J^T (J J^T)^+ P(x), and the angle is
measured against the orthogonal complement of the gradient span at the projected zeros.
"""

import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np

from exponents.rational import to_rational
from extension.profiles import FrequencyProfile
from numerics.errors import DomainError
from wavepackets.partition import WavePacketDecomposition
from wavepackets.tubes import Tile, Tube

logger = logging.getLogger(__name__)

SINGULAR_WEDGE = 1e-9
RESIDUAL_TOLERANCE = 1e-9
MAX_ITERATIONS = 60
CORE_SAMPLES = 17

_TERM = re.compile(r"[+-]?[^+-]+")
_NUMBER = re.compile(r"^\d+(\.\d+)?(/\d+)?$")
_VARIABLE = re.compile(r"^x(\d+)(\^(\d+))?$")

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class Polynomial:
    d: int
    terms: Dict[Monomial, Fraction]

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def __str__(self) -> str:
        parts = []
        for monomial, coefficient in self.terms.items():
            factors = [f"x{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(monomial) if e]
            parts.append("*".join([str(coefficient)] + factors) if coefficient != 1 or not factors else "*".join(factors))
        return " + ".join(parts) or "0"

    def value(self, points: np.ndarray) -> np.ndarray:
        total = np.zeros(len(points))
        for monomial, coefficient in self.terms.items():
            total += float(coefficient) * np.prod(points ** np.asarray(monomial), axis=1)
        return total

    def gradient(self, points: np.ndarray) -> np.ndarray:
        grad = np.zeros_like(points)
        for monomial, coefficient in self.terms.items():
            for k, power in enumerate(monomial):
                if power == 0:
                    continue
                reduced = list(monomial)
                reduced[k] -= 1
                grad[:, k] += float(coefficient) * power * np.prod(points ** np.asarray(reduced), axis=1)
        return grad


def parse_polynomial(text: str, d: int) -> Polynomial:
    """
    Parse a polynomial in x1..xd with rational coefficients.

    Terms are separated by + and -, factors by *; coefficients are integers, finite decimals or
    fractions p/q, and powers are written xk^n.

    Example:
        >>> str(parse_polynomial("x3 - x1^2 - 1/2*x2^2", 3))
        'x3 + -1*x1^2 + -1/2*x2^2'
    """
    compact = text.replace(" ", "")
    if not compact:
        raise DomainError("empty polynomial", "variety")
    if "".join(_TERM.findall(compact)) != compact:
        raise DomainError(f"cannot parse polynomial {text!r}", "variety")
    terms: Dict[Monomial, Fraction] = {}
    for raw in _TERM.findall(compact):
        sign = -1 if raw.startswith("-") else 1
        body = raw.lstrip("+-")
        coefficient = Fraction(sign)
        powers = [0] * d
        for factor in body.split("*"):
            if _NUMBER.match(factor):
                coefficient *= to_rational(factor, "variety")
                continue
            match = _VARIABLE.match(factor)
            if not match:
                raise DomainError(f"cannot parse factor {factor!r} of {text!r}", "variety")
            k = int(match.group(1))
            if not 1 <= k <= d:
                raise DomainError(f"variable x{k} outside x1..x{d}", "variety")
            powers[k - 1] += int(match.group(3) or 1)
        key = tuple(powers)
        terms[key] = terms.get(key, Fraction(0)) + coefficient
    terms = {m: c for m, c in terms.items() if c != 0}
    if not terms:
        raise DomainError(f"polynomial {text!r} is identically zero", "variety")
    return Polynomial(d, terms)


@dataclass(frozen=True)
class Variety:
    d: int
    polynomials: Tuple[Polynomial, ...]

    def __post_init__(self):
        if not 1 <= len(self.polynomials) <= self.d - 1:
            raise DomainError(f"need between 1 and {self.d - 1} polynomials, got {len(self.polynomials)}", "variety")
        if any(p.d != self.d for p in self.polynomials):
            raise DomainError("polynomials must share the ambient dimension", "variety")

    @property
    def codimension(self) -> int:
        return len(self.polynomials)

    @property
    def dimension(self) -> int:
        return self.d - self.codimension

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.polynomials)

    def values(self, points) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.column_stack([p.value(points) for p in self.polynomials])

    def jacobian(self, points) -> np.ndarray:
        """Array of shape (N, k, d) holding the gradients of the k polynomials."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.stack([p.gradient(points) for p in self.polynomials], axis=1)

    def wedge(self, points) -> np.ndarray:
        J = self.jacobian(points)
        gram = J @ np.swapaxes(J, 1, 2)
        return np.sqrt(np.clip(np.linalg.det(gram), 0.0, None))

    def transversality_witness(self, points) -> float:
        """Smallest gradient wedge over sampled zeros."""
        return float(np.min(self.wedge(points)))

    def project(self, points, max_iterations: int = MAX_ITERATIONS) -> Tuple[np.ndarray, np.ndarray]:
        """
        Gauss-Newton projection of points onto Z.

        Returns:
            (zeros, converged): the final iterates and a per-point convergence mask
        """
        x = np.atleast_2d(np.asarray(points, dtype=float)).copy()
        for _ in range(max_iterations):
            residual = self.values(x)
            done = np.linalg.norm(residual, axis=1) <= RESIDUAL_TOLERANCE * np.maximum(1.0, np.linalg.norm(x, axis=1))
            if np.all(done):
                break
            J = self.jacobian(x)
            gram = J @ np.swapaxes(J, 1, 2)
            correction = np.einsum("nkd,nk->nd", J, np.einsum("nij,nj->ni", np.linalg.pinv(gram), residual))
            x[~done] -= correction[~done]
        residual = self.values(x)
        converged = np.linalg.norm(residual, axis=1) <= RESIDUAL_TOLERANCE * np.maximum(1.0, np.linalg.norm(x, axis=1))
        converged &= np.all(np.isfinite(x), axis=1)
        return x, converged

    def tangent_angle(self, zeros, vector) -> np.ndarray:
        """Angle between a unit vector and the tangent space T_z Z at each zero."""
        J = self.jacobian(zeros)
        angles = np.empty(len(J))
        for i, gradients in enumerate(J):
            basis, _ = np.linalg.qr(gradients.T)
            normal_part = float(np.linalg.norm(basis.T @ vector))
            angles[i] = math.asin(min(1.0, normal_part))
        return angles


def parse_variety(text: str, d: int) -> Variety:
    """Polynomials separated by ';'."""
    return Variety(d, tuple(parse_polynomial(part, d) for part in text.split(";") if part.strip()))


class TangencyVerdict(str, Enum):
    TANGENT = "tangent"
    NOT_TANGENT = "not_tangent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class TangencyReport:
    verdict: TangencyVerdict
    max_distance: float
    max_angle: float
    samples: int
    singular: int
    reason: str = ""

    @property
    def tangent(self) -> bool:
        return self.verdict is TangencyVerdict.TANGENT


def tangency_test(tube: Tube, Z: Variety, E: float, samples: int = CORE_SAMPLES) -> TangencyReport:
    """
    Sampled tangency check of a tube against a variety at scale E.

    Args:
        tube: Tube of a tile at scale R
        Z: Variety in R^d
        E: Tangency scale
        samples: Points sampled along the part of the central line inside B_R

    Returns:
        TangencyReport: tangent / not_tangent / inconclusive with the sampled distance and angle
    """
    if Z.d != tube.tile.d:
        raise DomainError(f"variety lives in R^{Z.d}, tube in R^{tube.tile.d}", "variety")
    if E <= 0:
        raise DomainError(f"E must be positive, got {E}", "E")
    R = tube.length
    segment = tube.core_segment()
    if segment is None:
        return TangencyReport(TangencyVerdict.INCONCLUSIVE, math.nan, math.nan, 0, 0, "tube misses B_R")

    core = tube.core_point(np.linspace(segment[0], segment[1], samples))
    zeros, converged = Z.project(core)
    if not np.all(converged):
        return TangencyReport(TangencyVerdict.INCONCLUSIVE, math.nan, math.nan, samples, 0, "projection did not converge")

    distances = np.linalg.norm(core - zeros, axis=1)
    max_distance = float(distances.max())
    if max_distance > E * math.sqrt(R):
        return TangencyReport(TangencyVerdict.NOT_TANGENT, max_distance, math.nan, samples, 0, "distance")

    nearby = (distances <= 2 * E * math.sqrt(R)) & (np.linalg.norm(zeros, axis=1) <= 2 * R)
    candidates = zeros[nearby]
    regular = Z.wedge(candidates) >= SINGULAR_WEDGE
    singular = int(np.sum(~regular))
    if not np.any(regular):
        return TangencyReport(TangencyVerdict.INCONCLUSIVE, max_distance, math.nan, samples, singular, "all zeros singular")

    max_angle = float(Z.tangent_angle(candidates[regular], tube.direction).max())
    verdict = TangencyVerdict.TANGENT if max_angle <= E / math.sqrt(R) else TangencyVerdict.NOT_TANGENT
    return TangencyReport(verdict, max_distance, max_angle, samples, singular, "" if verdict is TangencyVerdict.TANGENT else "angle")


@dataclass
class ConcentrationResult:
    mass_in: float
    mass_out: float
    mass_inconclusive: float
    energy_in: float
    energy_out: float
    energy_inconclusive: float
    verdicts: Dict[str, TangencyVerdict] = field(default_factory=dict)

    @property
    def inconclusive(self) -> int:
        return sum(v is TangencyVerdict.INCONCLUSIVE for v in self.verdicts.values())

    @property
    def energy_total(self) -> float:
        return self.energy_in + self.energy_out + self.energy_inconclusive


PieceSource = Union[WavePacketDecomposition, Iterable[Tuple[Tile, FrequencyProfile]]]


def concentration_test(pieces: PieceSource, Z: Variety, E: float, threads: int = 1) -> ConcentrationResult:
    """
    Split the L^2 mass of the pieces by the tangency verdict of their tubes.

    mass_* are sums of piece norms; energy_* are sums of squared norms.
    """
    pairs: List[Tuple[Tile, FrequencyProfile]] = list(pieces)

    def judge(pair):
        return tangency_test(Tube.from_tile(pair[0]), Z, E).verdict

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        verdicts = list(pool.map(judge, pairs))

    sums = {v: [0.0, 0.0] for v in TangencyVerdict}
    for (tile, piece), verdict in zip(pairs, verdicts):
        norm = piece.l2_norm()
        sums[verdict][0] += norm
        sums[verdict][1] += norm * norm
    result = ConcentrationResult(
        sums[TangencyVerdict.TANGENT][0],
        sums[TangencyVerdict.NOT_TANGENT][0],
        sums[TangencyVerdict.INCONCLUSIVE][0],
        sums[TangencyVerdict.TANGENT][1],
        sums[TangencyVerdict.NOT_TANGENT][1],
        sums[TangencyVerdict.INCONCLUSIVE][1],
        {tile.key: verdict for (tile, _), verdict in zip(pairs, verdicts)},
    )
    logger.info("concentration at E=%g: in %.4g, out %.4g, %d inconclusive",
                E, result.mass_in, result.mass_out, result.inconclusive)
    return result
