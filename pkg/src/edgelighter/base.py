"""
Base classes for edgelighter walks
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError, InvalidParameterError
from ..graph_core import Graph, Partition, RngStream, pair_endpoints

logger = logging.getLogger(__name__)


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidParameterError(f"{name} must be in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class StandardWalkParams:
    """Lamp resampling probabilities: on -> off with q1, off -> on with q2"""
    q_on_to_off: float = 0.5
    q_off_to_on: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "q_on_to_off", _check_probability("q_on_to_off", self.q_on_to_off))
        object.__setattr__(self, "q_off_to_on", _check_probability("q_off_to_on", self.q_off_to_on))

    @property
    def q1(self) -> float:
        return self.q_on_to_off

    @property
    def q2(self) -> float:
        return self.q_off_to_on


@dataclass(frozen=True)
class BlockWalkParams:
    """Per-community lamp probabilities q_{i;1} (on -> off) and q_{i;2} (off -> on)"""
    q_on_to_off: tuple
    q_off_to_on: tuple

    def __post_init__(self):
        q1 = tuple(_check_probability("q_on_to_off", q) for q in self.q_on_to_off)
        q2 = tuple(_check_probability("q_off_to_on", q) for q in self.q_off_to_on)
        if len(q1) != len(q2) or not q1:
            raise DimensionMismatchError("Per-community q vectors must be nonempty and of equal length")
        object.__setattr__(self, "q_on_to_off", q1)
        object.__setattr__(self, "q_off_to_on", q2)

    @classmethod
    def uniform(cls, k: int, q_on_to_off: float = 0.5, q_off_to_on: float = 0.5) -> "BlockWalkParams":
        return cls((q_on_to_off,) * k, (q_off_to_on,) * k)

    @property
    def k(self) -> int:
        return len(self.q_on_to_off)

    def community(self, i: int) -> StandardWalkParams:
        return StandardWalkParams(self.q_on_to_off[i], self.q_off_to_on[i])


class CoverTracker:
    """
    Which unordered pairs the walk has traversed so far

    A step covers pair indices handed to ``mark``/``mark_batch``; self-jumps
    cover nothing. ``coverable`` restricts the pairs that count towards full
    cover (all pairs by default).
    """

    def __init__(self, num_pairs: int, coverable: Optional[np.ndarray] = None):
        self.covered = np.zeros(num_pairs, dtype=bool)
        if coverable is not None:
            coverable = np.asarray(coverable, dtype=bool)
            if coverable.shape != (num_pairs,):
                raise DimensionMismatchError("Coverable mask must have one entry per pair")
            self.total = int(np.count_nonzero(coverable))
        else:
            self.total = num_pairs
        self.coverable = coverable
        self.covered_count = 0
        self.cover_time: Optional[int] = 0 if self.total == 0 else None

    @property
    def cover_rate(self) -> float:
        if self.total == 0:
            return 1.0
        return self.covered_count / self.total

    @property
    def complete(self) -> bool:
        return self.cover_time is not None

    def mark(self, pair: int, step: int) -> None:
        if self.covered[pair]:
            return
        if self.coverable is not None and not self.coverable[pair]:
            return
        self.covered[pair] = True
        self.covered_count += 1
        if self.covered_count == self.total:
            self.cover_time = int(step)

    def mark_batch(self, pairs: np.ndarray, steps: np.ndarray) -> None:
        """
        Mark pairs traversed at the given steps

        Args:
            pairs: pair indices (may repeat)
            steps: step number of each traversal, nondecreasing
        """
        if self.cover_time is not None or len(pairs) == 0:
            return
        unique, first = np.unique(pairs, return_index=True)
        new = ~self.covered[unique]
        if self.coverable is not None:
            new &= self.coverable[unique]
        if not new.any():
            return
        newly = unique[new]
        self.covered[newly] = True
        self.covered_count += len(newly)
        if self.covered_count == self.total:
            self.cover_time = int(np.max(np.asarray(steps)[first[new]]))

    def copy(self) -> "CoverTracker":
        clone = CoverTracker.__new__(CoverTracker)
        clone.covered = self.covered.copy()
        clone.coverable = self.coverable
        clone.total = self.total
        clone.covered_count = self.covered_count
        clone.cover_time = self.cover_time
        return clone


def community_pair_labels(partition: Partition) -> np.ndarray:
    """Community of every pair whose endpoints share one, -1 for cross pairs"""
    rows, cols = pair_endpoints(partition.n)
    labels = partition.labels
    return np.where(labels[rows] == labels[cols], labels[rows], -1)


def community_cover_rates(cover: CoverTracker, pair_labels: np.ndarray, k: int) -> Tuple[float, ...]:
    """
    Share of covered within-community pairs of every community

    Community i has n_i choose 2 pairs; a single-vertex community counts as
    covered.
    """
    within = pair_labels >= 0
    covered = np.bincount(pair_labels[within & cover.covered], minlength=k)
    total = np.bincount(pair_labels[within], minlength=k)
    return tuple(1.0 if t == 0 else float(c / t) for c, t in zip(covered, total))


@dataclass
class WalkState:
    """
    Live state of an edgelighter walk

    Attributes:
        graph: current configuration C_t (mutated in place by the walk)
        position: walker vertex L_t
        step: number of steps taken
        cover: traversal tracker
        community: walker community B_t (block walk only)
        cache: walk-private indexes derived from ``graph``; valid only while
            the walk is the sole writer of ``graph``
    """
    graph: Graph
    position: int
    step: int
    cover: CoverTracker
    community: Optional[int] = None
    cache: Dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.position < self.graph.n:
            raise InvalidParameterError(f"Position {self.position} outside [0, {self.graph.n})")
        if self.step < 0:
            raise InvalidParameterError("Step must be nonnegative")

    @property
    def cover_rate(self) -> float:
        return self.cover.cover_rate

    def snapshot(self) -> "WalkState":
        """Independent copy (the cache is rebuilt lazily on the copy)"""
        return WalkState(
            graph=self.graph.copy(),
            position=self.position,
            step=self.step,
            cover=self.cover.copy(),
            community=self.community
        )


class BaseWalk(ABC):
    """
    Abstract base class for edgelighter walks

    Subclasses consume a fixed number of uniforms per step, so advancing by
    k then m steps gives the same trajectory as advancing by k + m.
    """

    draws_per_step: int = 2

    def __init__(self, n: int):
        if n < 2:
            raise InvalidParameterError(f"Walks need n >= 2, got n={n}")
        self.n = n

    @abstractmethod
    def initial_state(self, g0: Graph, rng: RngStream, position: Optional[int] = None) -> WalkState:
        """Fresh state on a copy of g0"""
        pass

    @abstractmethod
    def _advance(self, state: WalkState, uniforms: np.ndarray) -> None:
        """Apply len(uniforms) steps in place; uniforms has shape (k, draws_per_step)"""
        pass

    def chunk_size(self, state: WalkState) -> int:
        return max(256, state.graph.num_pairs)

    def advance(self, state: WalkState, steps: int, rng: RngStream) -> WalkState:
        """
        Take ``steps`` steps in place

        Args:
            state: live walk state
            steps: number of steps (>= 0)
            rng: stream the per-step uniforms are drawn from

        Returns:
            The same (mutated) state
        """
        if steps < 0:
            raise InvalidParameterError("steps must be nonnegative")
        remaining = steps
        chunk = self.chunk_size(state)
        while remaining > 0:
            k = min(chunk, remaining)
            self._advance(state, rng.uniforms((k, self.draws_per_step)))
            remaining -= k
        return state


def draw_index(u: np.ndarray, size: int) -> np.ndarray:
    """floor(u * size) clipped into [0, size)"""
    return np.minimum((u * size).astype(np.int64), size - 1)


def resample_lamps(current: np.ndarray, u: np.ndarray, q1, q2) -> np.ndarray:
    """On lamps turn off when u < q1, off lamps turn on when u < q2"""
    return np.where(current, u >= q1, u < q2)


def occurrence_rounds(pairs: np.ndarray) -> Sequence[np.ndarray]:
    """
    Split step indices into rounds in which every pair appears at most once

    Round r holds the r-th occurrence of each pair, so applying rounds in
    order preserves the per-pair time order.
    """
    if len(pairs) == 0:
        return []
    order = np.argsort(pairs, kind="stable")
    sorted_pairs = pairs[order]
    starts = np.r_[0, np.flatnonzero(np.diff(sorted_pairs)) + 1]
    group_start = np.repeat(starts, np.diff(np.r_[starts, len(pairs)]))
    rank = np.arange(len(pairs)) - group_start
    return [np.sort(order[rank == r]) for r in range(int(rank.max()) + 1)]
