"""
Seed sets and matching results
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from ..errors import InvalidParameterError
from ..graph_core import PermutationMap, RngStream


class SeedSet:
    """Vertices whose correspondence is known and pinned to themselves"""

    def __init__(self, seeds: Iterable[int] = (), n: Optional[int] = None):
        seeds = np.unique(np.asarray(list(seeds), dtype=np.int64))
        if len(seeds) and seeds.min() < 0:
            raise InvalidParameterError("Seed ids must be nonnegative")
        if n is not None and len(seeds) and seeds.max() >= n:
            raise InvalidParameterError(f"Seed id {seeds.max()} outside [0, {n})")
        seeds.setflags(write=False)
        self.seeds = seeds

    @classmethod
    def empty(cls) -> "SeedSet":
        return cls(())

    @classmethod
    def all(cls, n: int) -> "SeedSet":
        return cls(range(n), n)

    def __len__(self) -> int:
        return len(self.seeds)

    def __contains__(self, v: int) -> bool:
        return bool(np.isin(v, self.seeds))

    def mask(self, n: int) -> np.ndarray:
        if len(self.seeds) and self.seeds.max() >= n:
            raise InvalidParameterError(f"Seed id {self.seeds.max()} outside [0, {n})")
        mask = np.zeros(n, dtype=bool)
        mask[self.seeds] = True
        return mask

    def free(self, n: int) -> np.ndarray:
        """Non-seed vertices in ascending order"""
        return np.flatnonzero(~self.mask(n))

    def __repr__(self) -> str:
        return f"SeedSet({self.seeds.tolist()})"


def sample_seeds(n: int, fraction: float, rng: RngStream) -> SeedSet:
    """
    round(fraction * n) seeds chosen uniformly without replacement

    Args:
        n: vertex count
        fraction: seed fraction in [0, 1]
        rng: random stream (consumes n uniforms)
    """
    if not 0.0 <= fraction <= 1.0:
        raise InvalidParameterError(f"Seed fraction must be in [0, 1], got {fraction}")
    count = int(round(fraction * n))
    order = np.argsort(rng.uniforms(n), kind="stable")
    return SeedSet(order[:count], n)


@dataclass
class MatchResult:
    """Output of a graph matching solver"""
    permutation: PermutationMap
    objective: int
    correctness: float
    per_community_correctness: Optional[np.ndarray] = None
    iterations: int = 0
    converged: bool = True
    objective_trace: List[float] = field(default_factory=list, repr=False)
    solver: str = ""

    @property
    def shuffled(self) -> int:
        return self.permutation.shuffle_count()

    def to_dict(self) -> Dict[str, Any]:
        result = {
            'solver': self.solver,
            'objective': self.objective,
            'correctness': self.correctness,
            'shuffled': self.shuffled,
            'iterations': self.iterations,
            'converged': self.converged,
        }
        if self.per_community_correctness is not None:
            for k, value in enumerate(self.per_community_correctness, start=1):
                result[f'community_{k}'] = float(value)
        return result
