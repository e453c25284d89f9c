"""
Graphs, random graph models, permutations and the matching objective
"""
from .graph import Graph, num_pairs, pair_endpoints, pair_index
from .objective import frobenius_mismatch, gmp_objective, objective_delta
from .partition import Partition, SbmParams, skewed_block_sizes, skewed_sbm_params
from .permutation import PermutationMap, shuffle_count
from .rng import RngStream
from .sampling import sample_er, sample_sbm

__all__ = [
    'Graph',
    'num_pairs',
    'pair_endpoints',
    'pair_index',
    'Partition',
    'SbmParams',
    'skewed_block_sizes',
    'skewed_sbm_params',
    'PermutationMap',
    'shuffle_count',
    'RngStream',
    'sample_er',
    'sample_sbm',
    'gmp_objective',
    'objective_delta',
    'frobenius_mismatch',
]
