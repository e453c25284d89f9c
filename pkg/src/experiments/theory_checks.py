"""
Exact small-graph checks of matchability and post-cover anonymization

Both checks solve the matching problem by exhaustive search, so they are
limited to graphs with at most nine vertices.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from scipy import stats

from ..config import WalkKind
from ..edgelighter import StandardWalkParams, run_walk
from ..errors import InvalidParameterError
from ..graph_core import Graph, PermutationMap, RngStream, sample_er
from ..matching import brute_force_gmp

logger = logging.getLogger(__name__)


def anonymization_tail_bound(n: int, beta: float) -> float:
    """
    Bound on the probability that a walk past 4 n^2 log n steps is not yet
    beta-anonymized: n^-2 + (2 n^beta)^(1 - n / (2 n^beta + 1))
    """
    if n < 2:
        raise InvalidParameterError(f"n must be >= 2, got {n}")
    if not 0.0 < beta < 1.0:
        raise InvalidParameterError(f"beta must lie in (0, 1), got {beta}")
    base = 2.0 * n ** beta
    return n ** -2.0 + base ** (1.0 - n / (base + 1.0))


def _params(p: float) -> StandardWalkParams:
    # q1 = 1 - p, q2 = p keeps ER(n, p) stationary and makes resampled lamps fresh
    return StandardWalkParams(q_on_to_off=1.0 - p, q_off_to_on=p)


def _check_size(n: int, replicates: int) -> None:
    if not 2 <= n <= 9:
        raise InvalidParameterError(f"Exact checks need 2 <= n <= 9, got {n}")
    if replicates < 1:
        raise InvalidParameterError(f"replicates must be >= 1, got {replicates}")


@dataclass
class MatchabilityReport:
    """Share of replicates whose optimum set only holds small shuffles"""
    n: int
    p: float
    t: int
    replicates: int
    threshold: float
    successes: int
    max_shuffles: List[int] = field(default_factory=list, repr=False)

    @property
    def rate(self) -> float:
        return self.successes / self.replicates

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'p': self.p,
            't': self.t,
            'replicates': self.replicates,
            'threshold': self.threshold,
            'rate': self.rate,
        }


def matchability_check(
    n: int,
    p: float,
    t: int,
    replicates: int,
    rng: RngStream,
    alpha: float = 0.5,
    factor: float = 2.0
) -> MatchabilityReport:
    """
    Run t standard walk steps from G0 ~ ER(n, p) and test whether every exact
    optimum of the unseeded matching shuffles fewer than factor * n^alpha vertices

    Args:
        n: vertex count (at most 9)
        p: edge density, walk uses q1 = 1 - p and q2 = p
        t: number of walk steps
        replicates: number of independent (G0, Gt) pairs
        rng: random stream
        alpha: exponent of the shuffle threshold
        factor: multiplier of the shuffle threshold

    Returns:
        MatchabilityReport
    """
    _check_size(n, replicates)
    if t < 0:
        raise InvalidParameterError(f"t must be >= 0, got {t}")
    threshold = factor * n ** alpha
    params = _params(p)

    successes = 0
    max_shuffles = []
    for r in range(replicates):
        rep_rng = rng.derive("matchability", r)
        g0 = sample_er(n, p, rep_rng.derive("graph"))
        gt = run_walk(
            g0, WalkKind.STANDARD, params, t, max(t, 1), None,
            rep_rng.derive("walk"), keep_snapshots=False
        )[-1].graph
        _, optima = brute_force_gmp(g0, gt)
        largest = max(opt.shuffle_count() for opt in optima)
        max_shuffles.append(largest)
        if largest < threshold:
            successes += 1

    report = MatchabilityReport(n, p, t, replicates, threshold, successes, max_shuffles)
    logger.info(f"Matchability n={n}, t={t}: {report.rate:.1%} of {replicates} replicates")
    return report


@dataclass
class PostCoverReport:
    """Exact optima after the cover time against an independent-graph null"""
    n: int
    p: float
    replicates: int
    identity_unique: int
    observed: np.ndarray = field(repr=False)
    null: np.ndarray = field(repr=False)
    cover_steps: np.ndarray = field(repr=False)
    censored: int = 0
    p_value: float = 1.0
    tail_bound: Optional[float] = None

    @property
    def identity_unique_rate(self) -> float:
        return self.identity_unique / self.replicates

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'p': self.p,
            'replicates': self.replicates,
            'identity_unique_rate': self.identity_unique_rate,
            'p_value': self.p_value,
            'mean_cover_step': float(np.mean(self.cover_steps)),
            'censored': self.censored,
            'tail_bound': self.tail_bound,
        }


def post_cover_check(
    n: int,
    p: float,
    replicates: int,
    rng: RngStream,
    max_steps: Optional[int] = None,
    beta: float = 0.5
) -> PostCoverReport:
    """
    Walk from G0 ~ ER(n, p) until every pair is covered, then solve the
    unseeded matching exactly

    The optimum objectives are compared with those of pairs of independent
    ER(n, p) graphs by a two-sided Mann-Whitney U test.

    Args:
        n: vertex count (at most 9)
        p: edge density, walk uses q1 = 1 - p and q2 = p
        replicates: number of replicates
        rng: random stream
        max_steps: step cap per walk (default 50 n^2 log n)
        beta: exponent for the reported tail bound

    Returns:
        PostCoverReport
    """
    _check_size(n, replicates)
    params = _params(p)
    cap = max_steps if max_steps is not None else int(math.ceil(50 * n * n * math.log(n)))
    identity = PermutationMap.identity(n)

    observed, null, cover_steps = [], [], []
    identity_unique = 0
    censored = 0
    for r in range(replicates):
        rep_rng = rng.derive("post-cover", r)
        g0 = sample_er(n, p, rep_rng.derive("graph"))
        final = run_walk(
            g0, WalkKind.STANDARD, params, cap, 1, lambda state: state.cover.complete,
            rep_rng.derive("walk"), keep_snapshots=False
        )[-1]
        if not final.cover.complete:
            censored += 1
        cover_steps.append(final.step)

        value, optima = brute_force_gmp(g0, final.graph)
        observed.append(value)
        if optima == [identity]:
            identity_unique += 1

        h0: Graph = sample_er(n, p, rep_rng.derive("null", 0))
        h1: Graph = sample_er(n, p, rep_rng.derive("null", 1))
        null.append(brute_force_gmp(h0, h1)[0])

    observed_arr = np.asarray(observed, dtype=float)
    null_arr = np.asarray(null, dtype=float)
    if np.ptp(np.concatenate([observed_arr, null_arr])) == 0:
        p_value = 1.0
    else:
        p_value = float(stats.mannwhitneyu(observed_arr, null_arr, alternative='two-sided').pvalue)

    if censored:
        logger.warning(f"{censored} of {replicates} walks did not cover within {cap} steps")
    report = PostCoverReport(
        n=n,
        p=p,
        replicates=replicates,
        identity_unique=identity_unique,
        observed=observed_arr,
        null=null_arr,
        cover_steps=np.asarray(cover_steps),
        censored=censored,
        p_value=p_value,
        tail_bound=anonymization_tail_bound(n, beta)
    )
    logger.info(
        f"Post-cover n={n}: identity unique in {report.identity_unique_rate:.1%}, "
        f"rank test p={p_value:.3g}"
    )
    return report
