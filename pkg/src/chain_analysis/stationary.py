"""
Numerical stationary vectors (power iteration), used to cross-check the closed forms
"""
import logging
from typing import Optional

import numpy as np

from ..errors import MixingNotReachedError
from .model import ChainModel

logger = logging.getLogger(__name__)


def power_iteration(
    model: ChainModel,
    tol: float = 1e-12,
    max_iterations: int = 1_000_000,
    start: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Dominant left eigenvector of the transition matrix

    Iterates x <- x P from the uniform vector until ||x P - x||_1 < tol.

    Raises:
        MixingNotReachedError: if the iteration cap is hit first
    """
    transposed = model.transition.T.tocsr()
    x = np.full(model.num_states, 1.0 / model.num_states) if start is None else np.asarray(start, float)
    for iteration in range(1, max_iterations + 1):
        y = transposed @ x
        y /= y.sum()
        if np.abs(y - x).sum() < tol:
            logger.debug(f"Power iteration converged after {iteration} iterations")
            return y
        x = y
    raise MixingNotReachedError(f"Power iteration did not converge in {max_iterations} iterations")
