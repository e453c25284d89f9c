"""
Base class for graph matchers
"""
import logging
from abc import ABC, abstractmethod
from typing import Optional

from ..errors import DimensionMismatchError, SeedViolationError
from ..graph_core import Graph, Partition, gmp_objective
from .metrics import match_correctness
from .types import MatchResult, SeedSet

logger = logging.getLogger(__name__)


class BaseMatcher(ABC):
    """
    Abstract base class for matchers

    ``match`` wraps the solver: it checks that every seed is fixed, recomputes
    the objective independently and fills in correctness metrics.
    """

    def __init__(self, matcher_name: str):
        self.matcher_name = matcher_name
        self.logger = logging.getLogger(f"{__name__}.{matcher_name}")

    @abstractmethod
    def solve(self, a: Graph, b: Graph, seeds: SeedSet) -> MatchResult:
        """
        Find a permutation maximizing Tr(A P B P^T)

        Args:
            a: first graph
            b: second graph
            seeds: pinned vertices

        Returns:
            Raw solver result
        """
        pass

    def match(
        self,
        a: Graph,
        b: Graph,
        seeds: Optional[SeedSet] = None,
        partition: Optional[Partition] = None
    ) -> MatchResult:
        """
        Run the solver and validate its output

        Args:
            a: first graph
            b: second graph
            seeds: pinned vertices
            partition: communities for per-community correctness

        Returns:
            Validated MatchResult
        """
        if a.n != b.n:
            raise DimensionMismatchError(f"Graphs differ in size: {a.n} vs {b.n}")
        seeds = seeds or SeedSet.empty()

        self.logger.debug(f"Running {self.matcher_name} on n={a.n} with {len(seeds)} seeds")
        result = self.solve(a, b, seeds)

        moved = seeds.seeds[result.permutation.image[seeds.seeds] != seeds.seeds]
        if len(moved):
            raise SeedViolationError(f"{self.matcher_name} moved seeds {moved.tolist()}")

        result.objective = gmp_objective(a, b, result.permutation)
        result.correctness, result.per_community_correctness = match_correctness(
            result.permutation, seeds, partition
        )
        result.solver = self.matcher_name
        return result
