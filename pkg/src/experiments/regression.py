"""
Power-law fits of anonymization times
"""
import logging
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from ..errors import InvalidParameterError

logger = logging.getLogger(__name__)


class LogLogFit(NamedTuple):
    """OLS line log t = slope * log n + intercept"""
    slope: float
    intercept: float
    residuals: np.ndarray

    def predict(self, n: float) -> float:
        return float(np.exp(self.intercept) * n ** self.slope)


def loglog_fit(points: Sequence[Tuple[float, float]]) -> LogLogFit:
    """
    Ordinary least squares on (log n, log t)

    Args:
        points: (n, t_hat) pairs, at least two with distinct n

    Returns:
        LogLogFit(slope, intercept, residuals in log space)
    """
    data = np.asarray(points, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or len(data) < 2:
        raise InvalidParameterError("loglog_fit needs at least two (n, t) points")
    if (data <= 0).any() or not np.isfinite(data).all():
        raise InvalidParameterError("loglog_fit needs positive finite coordinates")
    x, y = np.log(data[:, 0]), np.log(data[:, 1])
    if np.ptp(x) == 0:
        raise InvalidParameterError("loglog_fit needs at least two distinct n values")

    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    logger.debug(f"Log-log fit over {len(data)} points: slope {slope:.4f}")
    return LogLogFit(float(slope), float(intercept), residuals)
