"""
Finite-difference gradients for checking analytic ones.
"""
import logging
from typing import Callable

import numpy as np

from .constants import FD_STEP

log = logging.getLogger(__name__)


def finite_difference(
    func: Callable[[np.ndarray], float], x: np.ndarray, eps: float = FD_STEP
) -> np.ndarray:
    """
    Central-difference gradient of the scalar function func at x.

    x may have any shape; the result has the same shape.
    """
    x0 = np.array(x, dtype=float)
    flat = x0.reshape(-1)
    grad = np.zeros_like(flat)
    log.debug("finite differences over %d coordinates (eps=%g)", len(flat), eps)

    for j in range(len(flat)):
        x = flat.copy()
        x[j] = flat[j] + eps
        fplus = func(x.reshape(x0.shape))
        x[j] = flat[j] - eps
        fminus = func(x.reshape(x0.shape))
        grad[j] = (fplus - fminus) / (2 * eps)

    return grad.reshape(x0.shape)


def relative_error(analytic, numeric) -> float:
    """
    Largest absolute difference relative to the largest gradient entry.
    """
    analytic, numeric = np.asarray(analytic), np.asarray(numeric)
    scale = max(np.abs(analytic).max(), np.abs(numeric).max(), 1e-12)
    return float(np.abs(analytic - numeric).max() / scale)
