"""
Matching correctness
"""
from typing import Optional, Tuple

import numpy as np

from ..errors import DimensionMismatchError
from ..graph_core import Partition, PermutationMap
from .types import SeedSet


def match_correctness(
    p: PermutationMap,
    seeds: Optional[SeedSet] = None,
    partition: Optional[Partition] = None
) -> Tuple[float, Optional[np.ndarray]]:
    """
    Fraction of non-seed vertices v with sigma(v) = v

    Args:
        p: recovered matching
        seeds: pinned vertices, excluded from the fraction
        partition: communities for per-community fractions

    Returns:
        (overall fraction, per-community fractions or None); a community
        without free vertices gets NaN, and no free vertices at all gives 1.0
    """
    seeds = seeds or SeedSet.empty()
    free = ~seeds.mask(p.n)
    correct = p.fixed_points()
    total = int(np.count_nonzero(free))
    overall = 1.0 if total == 0 else float(np.count_nonzero(correct & free)) / total

    per_community = None
    if partition is not None:
        if partition.n != p.n:
            raise DimensionMismatchError("Partition and permutation sizes disagree")
        free_counts = np.bincount(partition.labels[free], minlength=partition.k)
        hit_counts = np.bincount(partition.labels[free & correct], minlength=partition.k)
        with np.errstate(invalid='ignore', divide='ignore'):
            per_community = np.where(free_counts > 0, hit_counts / np.maximum(free_counts, 1), np.nan)
    return overall, per_community
