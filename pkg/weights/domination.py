"""
Weighted versus unweighted p-integrals of band-limited functions.

For F with Fourier support in a ball of radius `band`, the ratio
int |F|^p H / int |F|^p over a weight's grid measures how much of F's mass the
weight sees. The band limit is checked on the same grid with a windowed FFT: the
share of spectral energy outside band * 1.25 (plus the window's main lobe) must
stay below 1e-3.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from numerics.errors import DomainError, ResolutionError
from weights.sampled import SampledWeight

logger = logging.getLogger(__name__)

BAND_MARGIN = 1.25
LEAKAGE_TOLERANCE = 1e-3


@dataclass(frozen=True)
class BandLimitedFunction:
    evaluate: Callable[[np.ndarray], np.ndarray]
    band: float = 1.0
    name: str = ""

    def scaled(self, factor: complex) -> "BandLimitedFunction":
        return BandLimitedFunction(lambda x: factor * self.evaluate(x), self.band, self.name)


@dataclass(frozen=True)
class DominationResult:
    lhs: float
    rhs: float
    ratio: float
    leakage: float


def band_leakage(samples: np.ndarray, spacing: float, band: float) -> float:
    """
    Share of the windowed spectrum of the samples outside band * 1.25 + (main-lobe width).

    The window is sin^4 along each axis, whose main lobe has half-width 6 pi / L.
    """
    shape = samples.shape
    lengths = np.asarray(shape) * spacing
    cutoff = band * BAND_MARGIN + 6 * np.pi / lengths.min()
    if cutoff >= np.pi / spacing:
        raise ResolutionError(
            f"spacing {spacing} cannot resolve frequencies up to {cutoff:.3g}", "spacing"
        )
    windowed = samples.astype(complex)
    for axis, n in enumerate(shape):
        window = np.sin(np.pi * (np.arange(n) + 0.5) / n) ** 4
        windowed = windowed * window.reshape([-1 if k == axis else 1 for k in range(len(shape))])
    spectrum = np.abs(np.fft.fftn(windowed)) ** 2
    frequencies = np.meshgrid(*[2 * np.pi * np.fft.fftfreq(n, spacing) for n in shape], indexing="ij")
    radius = np.sqrt(sum(f**2 for f in frequencies))
    total = spectrum.sum()
    return float(spectrum[radius > cutoff].sum() / total) if total > 0 else 0.0


def banded_domination_check(function: BandLimitedFunction, weight: SampledWeight, p: float) -> DominationResult:
    """
    Compute int |F|^p H, int |F|^p and their ratio on the weight's grid.

    Raises:
        DomainError: If p < 1
        ResolutionError: If F's declared band limit is violated on the grid
    """
    if p < 1:
        raise DomainError(f"p must be at least 1, got {p}", "p")
    samples = np.asarray(function.evaluate(weight.cell_centers())).reshape(weight.shape)
    leakage = band_leakage(samples, weight.spacing, function.band)
    if leakage > LEAKAGE_TOLERANCE:
        raise ResolutionError(
            f"{function.name or 'function'} leaks {leakage:.2e} of its spectrum beyond band {function.band}", "band"
        )
    power = np.abs(samples) ** p
    lhs = float(np.sum(power * weight.values) * weight.cell_volume)
    rhs = float(np.sum(power) * weight.cell_volume)
    ratio = lhs / rhs if rhs > 0 else 0.0
    logger.debug("domination check p=%g: ratio %.6g, leakage %.2e", p, ratio, leakage)
    return DominationResult(lhs, rhs, ratio, leakage)
