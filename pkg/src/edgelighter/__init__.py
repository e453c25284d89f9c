"""
Edgelighter noise processes on graphs
"""
from .base import (
    BaseWalk,
    BlockWalkParams,
    CoverTracker,
    StandardWalkParams,
    WalkState,
    community_cover_rates,
    community_pair_labels,
)
from .block import BlockWalk, coverable_pairs, cross_edge_counts, step_block
from .estimators import (
    TraversalEstimate,
    edge_correlation,
    estimate_traversal_prob,
    traversal_bounds,
)
from .factory import WalkFactory
from .global_walk import GlobalWalk, step_global
from .runner import run_walk
from .standard import StandardWalk, step_standard

__all__ = [
    'BaseWalk',
    'BlockWalkParams',
    'CoverTracker',
    'StandardWalkParams',
    'WalkState',
    'community_cover_rates',
    'community_pair_labels',
    'BlockWalk',
    'GlobalWalk',
    'StandardWalk',
    'WalkFactory',
    'coverable_pairs',
    'cross_edge_counts',
    'step_block',
    'step_global',
    'step_standard',
    'run_walk',
    'TraversalEstimate',
    'edge_correlation',
    'estimate_traversal_prob',
    'traversal_bounds',
]
