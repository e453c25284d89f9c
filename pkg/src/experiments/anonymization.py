"""
Anonymization-time detection from matching traces

The estimator is a persistence-window threshold: a checkpoint counts as
anonymized when the matcher shuffles more than n^beta non-seed vertices there
and at the following ``persistence - 1`` checkpoints.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvalidParameterError
from ..graph_core import Partition
from ..matching import SeedSet

logger = logging.getLogger(__name__)

ESTIMATOR_LABEL = "persistence-window"


@dataclass(frozen=True)
class TraceRecord:
    """One matching checkpoint of a walk"""
    step: int
    correctness: float
    cover_rate: float
    per_community: Optional[Tuple[float, ...]] = None
    objective: int = 0
    shuffled: int = 0
    community_cover: Optional[Tuple[float, ...]] = None

    def to_dict(self) -> Dict[str, Any]:
        result = {
            'step': self.step,
            'correctness': self.correctness,
            'cover_rate': self.cover_rate,
        }
        if self.per_community is not None:
            for k, value in enumerate(self.per_community, start=1):
                result[f'community_{k}'] = value
        if self.community_cover is not None:
            for k, value in enumerate(self.community_cover, start=1):
                result[f'cover_community_{k}'] = value
        result['objective'] = self.objective
        result['shuffled'] = self.shuffled
        return result


@dataclass(frozen=True)
class AnonymizationEstimate:
    """Estimated beta-anonymization time (community is 0-based, None for global)"""
    beta: float
    t_hat: Optional[int]
    persistence: int
    community: Optional[int] = None

    @property
    def detected(self) -> bool:
        return self.t_hat is not None

    @property
    def scope(self) -> str:
        return "global" if self.community is None else f"community_{self.community + 1}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'beta': self.beta,
            't_hat': self.t_hat,
            'persistence': self.persistence,
            'scope': self.scope,
            'estimator': ESTIMATOR_LABEL,
        }


def _check(beta: float, persistence: int) -> None:
    if not 0.0 < beta < 1.0:
        raise InvalidParameterError(f"beta must lie in (0, 1), got {beta}")
    if persistence < 1:
        raise InvalidParameterError(f"persistence must be >= 1, got {persistence}")


def _first_persistent(steps: Sequence[int], flags: np.ndarray, persistence: int) -> Optional[int]:
    """First step whose flag holds for a full window of ``persistence`` checkpoints"""
    run = 0
    for i, flag in enumerate(flags):
        run = run + 1 if flag else 0
        if run >= persistence:
            return int(steps[i - persistence + 1])
    return None


def shuffle_threshold(size: float, beta: float, n_free: int) -> float:
    """Correctness below which more than size^beta of n_free vertices are shuffled"""
    if n_free <= 0:
        return -np.inf
    return 1.0 - size ** beta / n_free


def detect_anonymization(
    trace: Sequence[TraceRecord],
    n: int,
    beta: float,
    persistence: int = 3,
    n_free: Optional[int] = None
) -> AnonymizationEstimate:
    """
    First checkpoint at which the matcher shuffles more than n^beta free vertices

    Args:
        trace: checkpoints in step order
        n: graph size
        beta: anonymization exponent in (0, 1)
        persistence: number of consecutive checkpoints the criterion must hold
        n_free: number of non-seed vertices (defaults to n)

    Returns:
        AnonymizationEstimate with t_hat None when never detected
    """
    _check(beta, persistence)
    if not trace:
        raise InvalidParameterError("Cannot detect anonymization on an empty trace")
    threshold = shuffle_threshold(n, beta, n if n_free is None else n_free)
    correctness = np.array([record.correctness for record in trace], dtype=float)
    flags = correctness < threshold
    t_hat = _first_persistent([record.step for record in trace], flags, persistence)
    return AnonymizationEstimate(beta=beta, t_hat=t_hat, persistence=persistence)


def detect_community_anonymization(
    trace: Sequence[TraceRecord],
    partition: Partition,
    seeds: SeedSet,
    beta: float,
    persistence: int = 3
) -> List[AnonymizationEstimate]:
    """
    Local anonymization time of every community

    Community k uses its own size n_k and free count; a community with no
    free vertices is never detected.
    """
    _check(beta, persistence)
    if not trace:
        raise InvalidParameterError("Cannot detect anonymization on an empty trace")
    if any(record.per_community is None for record in trace):
        raise InvalidParameterError("Trace has no per-community correctness")

    free = ~seeds.mask(partition.n)
    free_counts = np.bincount(partition.labels[free], minlength=partition.k)
    table = np.array([record.per_community for record in trace], dtype=float)
    steps = [record.step for record in trace]

    estimates = []
    for k in range(partition.k):
        threshold = shuffle_threshold(partition.sizes[k], beta, int(free_counts[k]))
        with np.errstate(invalid='ignore'):
            flags = table[:, k] < threshold
        estimates.append(AnonymizationEstimate(
            beta=beta,
            t_hat=_first_persistent(steps, flags, persistence),
            persistence=persistence,
            community=k
        ))
    return estimates
