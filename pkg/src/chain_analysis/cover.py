"""
Monte Carlo cover times and the cover-time bracket of the mixing time
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from ..config import WalkKind
from ..edgelighter import BlockWalk, BlockWalkParams, CoverTracker, StandardWalkParams
from ..edgelighter.base import draw_index
from ..errors import DataError, InvalidParameterError
from ..graph_core import Graph, Partition, RngStream, num_pairs, pair_index
from .enumeration import check_standard_params, enumerate_standard_chain
from .mixing import exact_mixing_time

logger = logging.getLogger(__name__)

COVER_QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)


@dataclass
class CoverStats:
    """Monte Carlo summary of the pair cover time"""
    n: int
    replicates: int
    mean: float
    quantiles: Dict[float, float]
    lower_ref: float
    upper_ref: float
    samples: np.ndarray = field(repr=False, default=None)
    censored: int = 0

    @property
    def stderr(self) -> float:
        return float(np.std(self.samples, ddof=1) / math.sqrt(self.replicates))

    def tail_fraction(self, threshold: float) -> float:
        """Fraction of replicates with cover time >= threshold"""
        return float(np.mean(self.samples >= threshold))

    def to_dict(self) -> dict:
        result = {
            'n': self.n,
            'replicates': self.replicates,
            'mean': self.mean,
            'lower_ref': self.lower_ref,
            'upper_ref': self.upper_ref,
            'censored': self.censored,
        }
        for q, value in self.quantiles.items():
            result[f'q{int(round(q * 100))}'] = value
        return result


def cover_reference(n: int):
    """(1/2) n^2 log n and (5/2) n^2 log n"""
    scale = n * n * math.log(n)
    return 0.5 * scale, 2.5 * scale


def _standard_cover_time(n: int, rng: RngStream) -> int:
    """Cover time of one standard walk; only positions matter"""
    c = num_pairs(n)
    tracker = CoverTracker(c)
    chunk = max(256, 4 * c)
    position = int(draw_index(rng.uniforms(1), n)[0])
    step = 0
    while not tracker.complete:
        targets = draw_index(rng.uniforms(chunk), n)
        sources = np.r_[position, targets[:-1]]
        moved = np.flatnonzero(sources != targets)
        tracker.mark_batch(pair_index(sources[moved], targets[moved], n), step + 1 + moved)
        position = int(targets[-1])
        step += chunk
    return tracker.cover_time


def _block_cover_time(graph: Graph, walk: BlockWalk, rng: RngStream, max_steps: int) -> Optional[int]:
    state = walk.initial_state(graph, rng.derive("start"))
    step_rng = rng.derive("steps")
    while not state.cover.complete and state.step < max_steps:
        walk.advance(state, min(4096, max_steps - state.step), step_rng)
    return state.cover.cover_time


def cover_time_stats(
    n: int,
    kind: Union[WalkKind, str],
    params: Union[StandardWalkParams, BlockWalkParams],
    replicates: int,
    rng: RngStream,
    graph: Optional[Graph] = None,
    partition: Optional[Partition] = None,
    max_steps: Optional[int] = None
) -> CoverStats:
    """
    Monte Carlo distribution of the pair cover time

    For the standard walk the cover time depends only on the walker path.
    For the block walk a graph and partition are needed; cover there means
    every pair the walk can touch has been traversed, and runs still
    uncovered after ``max_steps`` are recorded at the cap and counted as
    censored.

    Args:
        n: vertex count
        kind: standard or block
        params: walk parameters
        replicates: number of independent walks
        rng: random stream; replicate r uses a stream derived from (r,)
        graph: initial graph (block walk)
        partition: communities (block walk)
        max_steps: cap for block walks (default 50 n^2 log n)

    Returns:
        CoverStats with mean, quantiles and the coupon-collector references
    """
    kind = WalkKind(kind)
    if replicates < 1:
        raise InvalidParameterError("replicates must be >= 1")
    if n < 2:
        raise InvalidParameterError(f"Cover times need n >= 2, got n={n}")

    samples = np.empty(replicates, dtype=np.int64)
    censored = 0
    if kind == WalkKind.STANDARD:
        for r in range(replicates):
            samples[r] = _standard_cover_time(n, rng.derive("cover", r))
    elif kind == WalkKind.BLOCK:
        if graph is None or partition is None:
            raise DataError("Block cover times need an initial graph and a partition")
        if isinstance(params, StandardWalkParams):
            params = BlockWalkParams.uniform(partition.k, params.q1, params.q2)
        walk = BlockWalk(partition, params)
        cap = max_steps or int(50 * n * n * math.log(n)) + 1000
        for r in range(replicates):
            result = _block_cover_time(graph, walk, rng.derive("cover", r), cap)
            if result is None:
                censored += 1
                result = cap
            samples[r] = result
        if censored:
            logger.warning(f"{censored}/{replicates} block walks did not cover within {cap} steps")
    else:
        raise InvalidParameterError(f"Cover statistics are not defined for the {kind.value} walk")

    lower_ref, upper_ref = cover_reference(n)
    quantiles = {q: float(v) for q, v in zip(COVER_QUANTILES, np.quantile(samples, COVER_QUANTILES))}
    stats = CoverStats(
        n=n,
        replicates=replicates,
        mean=float(samples.mean()),
        quantiles=quantiles,
        lower_ref=lower_ref,
        upper_ref=upper_ref,
        samples=samples,
        censored=censored
    )
    logger.debug(f"Cover stats n={n}: mean {stats.mean:.1f}, reference [{lower_ref:.1f}, {upper_ref:.1f}]")
    return stats


@dataclass
class CoverBracket:
    """Exact mixing time against multiples of the Monte Carlo cover time"""
    n: int
    t_mix: int
    cover_mean: float
    cover_stderr: float
    lower: float  # cover_mean / 8
    upper: float  # 11 * cover_mean

    @property
    def upper_holds(self) -> bool:
        return self.t_mix <= self.upper + 11 * 3 * self.cover_stderr

    @property
    def lower_holds(self) -> bool:
        return self.t_mix >= self.lower

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            't_mix': self.t_mix,
            'cover_mean': self.cover_mean,
            'lower': self.lower,
            'upper': self.upper,
            'upper_holds': self.upper_holds,
            'lower_holds': self.lower_holds,
        }


def cover_bracket(n: int, params: StandardWalkParams, replicates: int, rng: RngStream) -> CoverBracket:
    """
    Compare the exact mixing time with (1/8, 11) times the mean cover time

    The upper side is expected to hold at every n; the lower side is an
    asymptotic statement and is only reported.
    """
    check_standard_params(params)
    model = enumerate_standard_chain(n, params)
    report = exact_mixing_time(model)
    stats = cover_time_stats(n, WalkKind.STANDARD, params, replicates, rng)
    bracket = CoverBracket(
        n=n,
        t_mix=report.t_mix,
        cover_mean=stats.mean,
        cover_stderr=stats.stderr,
        lower=stats.mean / 8.0,
        upper=11.0 * stats.mean
    )
    logger.info(
        f"Cover bracket n={n}: t_mix={bracket.t_mix}, mean cover={bracket.cover_mean:.2f}, "
        f"upper ok={bracket.upper_holds}, lower ok={bracket.lower_holds}"
    )
    return bracket
