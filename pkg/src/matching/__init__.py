"""
Graph matching: exact search, linear assignment, seeded Frank-Wolfe
"""
from ..errors import SeedViolationError
from .assignment import assignment_cost, lap_solve
from .base import BaseMatcher
from .brute_force import brute_force_gmp
from .factory import ExactMatcher, FaqMatcher, MatcherFactory
from .metrics import match_correctness
from .sgm import sgm_faq
from .types import MatchResult, SeedSet, sample_seeds

__all__ = [
    'BaseMatcher',
    'ExactMatcher',
    'FaqMatcher',
    'MatchResult',
    'MatcherFactory',
    'SeedSet',
    'SeedViolationError',
    'assignment_cost',
    'brute_force_gmp',
    'lap_solve',
    'match_correctness',
    'sample_seeds',
    'sgm_faq',
]
