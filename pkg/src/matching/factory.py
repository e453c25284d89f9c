"""
Factory for creating graph matchers
"""
import logging
from typing import Optional

from ..config import SolverOptions
from ..errors import InvalidParameterError
from ..graph_core import Graph, PermutationMap, RngStream
from .base import BaseMatcher
from .brute_force import brute_force_gmp
from .sgm import sgm_faq
from .types import MatchResult, SeedSet

logger = logging.getLogger(__name__)


class FaqMatcher(BaseMatcher):
    """Seeded Frank-Wolfe matcher"""

    def __init__(self, options: SolverOptions, rng: Optional[RngStream] = None):
        super().__init__("faq")
        self.options = options
        self.rng = rng

    def solve(self, a: Graph, b: Graph, seeds: SeedSet) -> MatchResult:
        return sgm_faq(a, b, seeds, self.options, self.rng)


class ExactMatcher(BaseMatcher):
    """
    Exhaustive matcher for at most nine free vertices

    Returns the identity when it is among the maximizers, otherwise the
    lexicographically smallest maximizer.
    """

    def __init__(self):
        super().__init__("exact")

    def solve(self, a: Graph, b: Graph, seeds: SeedSet) -> MatchResult:
        value, optima = brute_force_gmp(a, b, seeds)
        identity = PermutationMap.identity(a.n)
        chosen = identity if identity in optima else optima[0]
        return MatchResult(
            permutation=chosen,
            objective=value,
            correctness=0.0,
            iterations=0,
            converged=True
        )


class MatcherFactory:
    """Factory for creating matchers by name"""

    @staticmethod
    def create_matcher(
        name: str = "faq",
        options: Optional[SolverOptions] = None,
        rng: Optional[RngStream] = None
    ) -> BaseMatcher:
        """
        Create a matcher

        Args:
            name: "faq" or "exact"
            options: solver options (faq)
            rng: stream for randomized restarts (faq)

        Returns:
            Matcher instance
        """
        if name == "faq":
            return FaqMatcher(options or SolverOptions(), rng)

        elif name == "exact":
            return ExactMatcher()

        else:
            raise InvalidParameterError(f"Unknown matcher: {name}")
