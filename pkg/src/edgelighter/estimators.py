"""
Monte Carlo estimators: traversal probability and edge correlation
"""
import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError, InvalidParameterError, UndefinedCorrelationError
from ..graph_core import Graph, RngStream, num_pairs
from .base import draw_index

logger = logging.getLogger(__name__)

_REPLICATE_CHUNK = 4096
_BLOCK_ELEMENTS = 1 << 18  # positions simulated per block of steps


@dataclass
class TraversalEstimate:
    """Estimate of the probability that a fixed pair is untraversed after t steps"""
    t: int
    n: int
    p_hat: float
    stderr: float
    lower_bound: float
    upper_bound: float
    replicates: int = 0

    def to_dict(self) -> dict:
        return {
            't': self.t,
            'n': self.n,
            'p_hat': self.p_hat,
            'stderr': self.stderr,
            'lower_bound': self.lower_bound,
            'upper_bound': self.upper_bound,
            'replicates': self.replicates,
        }


def traversal_bounds(n: int, t: int) -> Tuple[float, float, float, float]:
    """
    Bounds on the untraversed probability of a fixed pair after t steps

    Returns:
        (exact_lower, exact_upper, lower, upper) where
        exact_lower = (1 - 1/C)^t, exact_upper = (1 - 1/(C + n))^floor((t+1)/2),
        lower = exp(-t/(C - 1)), upper = exp(-floor((t+1)/2)/(C + n)),
        C = n choose 2
    """
    if n <= 3:
        raise InvalidParameterError(f"Traversal bounds need n > 3, got n={n}")
    if t < 0:
        raise InvalidParameterError("t must be nonnegative")
    c = num_pairs(n)
    half = (t + 1) // 2
    exact_lower = (1.0 - 1.0 / c) ** t
    exact_upper = (1.0 - 1.0 / (c + n)) ** half
    lower = math.exp(-t / (c - 1))
    upper = math.exp(-half / (c + n))
    return exact_lower, exact_upper, lower, upper


def estimate_traversal_prob(n: int, t: int, replicates: int, rng: RngStream) -> TraversalEstimate:
    """
    Estimate the probability that pair {0, 1} is not traversed in t steps

    The walker starts at a uniform vertex and jumps uniformly; lamps play no
    role, so only positions are simulated, vectorized over replicates. The
    horizon is walked in blocks of steps carrying each replicate's position
    and hit flag, and a chunk stops early once every replicate has hit.

    Args:
        n: vertex count (> 3)
        t: number of steps
        replicates: Monte Carlo sample size
        rng: random stream

    Returns:
        Estimate with binomial standard error and the exponential bounds
    """
    if replicates < 1:
        raise InvalidParameterError("replicates must be >= 1")
    _, _, lower, upper = traversal_bounds(n, t)

    untraversed = 0
    stream = rng.derive("traversal", n, t)
    done = 0
    while done < replicates:
        size = min(_REPLICATE_CHUNK, replicates - done)
        current = draw_index(stream.uniforms(size), n)
        hit = np.zeros(size, dtype=bool)
        block = max(1, _BLOCK_ELEMENTS // size)
        taken = 0
        while taken < t and not hit.all():
            span = min(block, t - taken)
            path = np.empty((size, span + 1), dtype=np.int64)
            path[:, 0] = current
            # time-major draws keep the result independent of the block size
            path[:, 1:] = draw_index(stream.uniforms((span, size)), n).T
            lo = np.minimum(path[:, :-1], path[:, 1:])
            hi = np.maximum(path[:, :-1], path[:, 1:])
            hit |= ((lo == 0) & (hi == 1)).any(axis=1)
            current = path[:, -1]
            taken += span
        untraversed += int(size - np.count_nonzero(hit))
        done += size

    p_hat = untraversed / replicates
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / replicates)
    logger.debug(f"Traversal estimate n={n}, t={t}: {p_hat:.4f} +/- {stderr:.4f}")
    return TraversalEstimate(
        t=t, n=n, p_hat=p_hat, stderr=stderr,
        lower_bound=lower, upper_bound=upper, replicates=replicates
    )


def edge_correlation(
    a0: Graph,
    at: Graph,
    replicate_pairs: Sequence[Tuple[Graph, Graph]] = ()
) -> float:
    """
    Pooled correlation of edge indicators between initial and noisy graphs

    Pools (A_0[u, v], A_t[u, v]) over all pairs of (a0, at) and of every
    additional replicate pair.

    Raises:
        UndefinedCorrelationError: if either pooled margin is constant
    """
    pairs = [(a0, at)] + list(replicate_pairs)
    for first, second in pairs:
        if first.n != second.n:
            raise DimensionMismatchError("Replicate pair graphs differ in size")
    x = np.concatenate([first.edges for first, _ in pairs]).astype(float)
    y = np.concatenate([second.edges for _, second in pairs]).astype(float)
    if x.size == 0 or x.min() == x.max() or y.min() == y.max():
        raise UndefinedCorrelationError("Edge indicators have a constant margin")
    return float(np.corrcoef(x, y)[0, 1])
