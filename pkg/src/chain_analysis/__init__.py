"""
Exact analysis of tiny edgelighter chains
"""
from .cover import CoverStats, CoverBracket, cover_reference, cover_time_stats, cover_bracket
from .enumeration import (
    block_state_count,
    enumerate_block_chain,
    enumerate_standard_chain,
    stationary_block,
    stationary_standard,
)
from .export import dump_chain_csv, dump_tv_curve_csv
from .mixing import (
    MixingReport,
    community_projection,
    exact_mixing_time,
    marginal_mixing_time,
    tv_distance,
)
from .model import ChainModel
from .stationary import power_iteration

__all__ = [
    'ChainModel',
    'CoverStats',
    'CoverBracket',
    'MixingReport',
    'block_state_count',
    'community_projection',
    'cover_reference',
    'cover_time_stats',
    'dump_chain_csv',
    'dump_tv_curve_csv',
    'enumerate_block_chain',
    'enumerate_standard_chain',
    'exact_mixing_time',
    'cover_bracket',
    'marginal_mixing_time',
    'power_iteration',
    'stationary_block',
    'stationary_standard',
    'tv_distance',
]
