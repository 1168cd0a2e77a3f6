"""
Power-Law Fitting Module

Least-squares fits of y = C * x^slope in log-log coordinates, used by the decay
fits of fractal measures and by the R-scaling experiments of the extension operator.

Key Features:
- Fit the log-log slope of positive samples with its standard error
- Reject non-positive samples instead of silently dropping them
- Refit from CSV columns so plots agree with the pipeline

Dependencies:
- numpy: For logarithms and array handling
- scipy.stats: For the linear regression itself
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import stats

from numerics.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    stderr: float
    count: int

    def predict(self, x):
        """Evaluate the fitted power law C * x^slope."""
        return np.exp(self.intercept) * np.asarray(x, dtype=float) ** self.slope


def fit_power_law(x, y, min_points: int = 2) -> PowerLawFit:
    """
    Fit log(y) = intercept + slope * log(x) by ordinary least squares.

    Args:
        x: Positive abscissae (for example the radii R)
        y: Positive samples (for example spherical averages or norms)
        min_points: Smallest number of samples accepted

    Returns:
        PowerLawFit: slope, intercept (natural log), slope standard error and sample count

    Raises:
        DomainError: If fewer than min_points samples are given or any sample is not positive

    Example:
        >>> fit = fit_power_law([1, 2, 4, 8], [1, 4, 16, 64])
        >>> round(fit.slope, 6)
        2.0
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("x and y must be one-dimensional arrays of equal length", "x")
    if x.size < min_points:
        raise DomainError(f"need at least {min_points} samples, got {x.size}", "count")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("power-law fits need strictly positive samples", "y")

    log_x, log_y = np.log(x), np.log(y)
    if np.ptp(log_y) == 0.0:
        # constant samples: linregress would divide by a zero residual
        return PowerLawFit(0.0, float(log_y[0]), 0.0, int(x.size))
    result = stats.linregress(log_x, log_y)
    stderr = float(result.stderr) if x.size > 2 else 0.0
    logger.debug("power-law fit over %d samples: slope=%.6f", x.size, result.slope)
    return PowerLawFit(float(result.slope), float(result.intercept), stderr, int(x.size))
