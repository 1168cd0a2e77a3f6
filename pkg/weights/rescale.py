"""
Parabolic rescaling of weights.

Under the change of variables y = T(x) = (x'/K + 2 x_d omega0 / K, x_d / K^2) a weight H
becomes H*(y) = K^(d - alpha) H(T^-1 y). If H grows like C r^alpha on balls, H* grows
like rescaled_weight_constant(C, K, alpha, omega0) r^alpha: the preimage of a ball of
radius r is covered by ceil(K sqrt(1 + 4|omega0|^2)) balls of radius sqrt(2) K r.
"""

import logging
import math

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from numerics.errors import DomainError
from weights.sampled import SampledWeight, box_weight

logger = logging.getLogger(__name__)


def _check(weight: SampledWeight, omega0: np.ndarray, K: float):
    if weight.d < 2:
        raise DomainError("rescaling needs d >= 2", "d")
    if omega0.shape != (weight.d - 1,):
        raise DomainError(f"omega0 must have {weight.d - 1} coordinates", "omega0")
    if K < 1:
        raise DomainError(f"K must be at least 1, got {K}", "K")


def forward_map(points: np.ndarray, omega0: np.ndarray, K: float) -> np.ndarray:
    """T(x) = (x'/K + 2 x_d omega0 / K, x_d / K^2)."""
    x_last = points[:, -1:]
    return np.hstack([(points[:, :-1] + 2 * x_last * omega0) / K, x_last / K**2])


def inverse_map(points: np.ndarray, omega0: np.ndarray, K: float) -> np.ndarray:
    """T^-1(y) = (K y' - 2 K^2 y_d omega0, K^2 y_d)."""
    y_last = points[:, -1:]
    return np.hstack([K * points[:, :-1] - 2 * K**2 * y_last * omega0, K**2 * y_last])


def rescaled_weight_constant(constant: float, K: float, alpha: float, omega0) -> float:
    omega0 = np.atleast_1d(np.asarray(omega0, dtype=float))
    cover = math.ceil(K * math.sqrt(1.0 + 4.0 * float(omega0 @ omega0)))
    return constant * 2 ** (alpha / 2) * cover / K


def rescale_weight(weight: SampledWeight, omega0, K: float, alpha: float, spacing: float = None) -> SampledWeight:
    """
    H*(y) = K^(d - alpha) H(T^-1 y), sampled on the bounding box of T(box) by linear interpolation.

    Args:
        weight: Weight H
        omega0: Cap center in B^{d-1}
        K: Rescaling factor
        alpha: Growth exponent of H
        spacing: Spacing of the new grid (defaults to the spacing of H)
    """
    omega0 = np.atleast_1d(np.asarray(omega0, dtype=float))
    _check(weight, omega0, K)
    corners = np.stack(
        [g.ravel() for g in np.meshgrid(*zip(weight.lower, weight.upper), indexing="ij")], axis=1
    )
    image = forward_map(corners, omega0, K)
    interpolator = RegularGridInterpolator(
        weight.axes(), weight.values, method="linear", bounds_error=False, fill_value=0.0
    )
    factor = K ** (weight.d - alpha)

    def sample(points):
        return np.clip(factor * interpolator(inverse_map(points, omega0, K)), 0.0, None)

    rescaled = box_weight(
        image.min(axis=0),
        image.max(axis=0),
        spacing or weight.spacing,
        sample,
        {"recipe": "rescaled", "alpha": alpha, "K": K, "omega0": omega0.tolist()},
    )
    logger.debug("rescaled weight K=%g omega0=%s: grid %s", K, omega0, rescaled.shape)
    return rescaled
