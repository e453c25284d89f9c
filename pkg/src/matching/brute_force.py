"""
Exhaustive graph matching for tiny instances
"""
import logging
from itertools import islice, permutations
from typing import List, Tuple

import numpy as np

from ..errors import DimensionMismatchError, InstanceTooLargeError
from ..graph_core import Graph, PermutationMap, gmp_objective
from .types import SeedSet

logger = logging.getLogger(__name__)

MAX_FREE_VERTICES = 9
_BATCH = 40320


def brute_force_gmp(a: Graph, b: Graph, seeds: SeedSet = None) -> Tuple[int, List[PermutationMap]]:
    """
    Maximum of Tr(A P B P^T) over all permutations fixing the seeds

    Args:
        a: first graph
        b: second graph
        seeds: vertices pinned to themselves

    Returns:
        (optimal objective, every optimal permutation in lexicographic order)
    """
    if a.n != b.n:
        raise DimensionMismatchError(f"Graphs differ in size: {a.n} vs {b.n}")
    seeds = seeds or SeedSet.empty()
    n = a.n
    free = seeds.free(n)
    if len(free) > MAX_FREE_VERTICES:
        raise InstanceTooLargeError(
            f"{len(free)} free vertices; exhaustive search allows at most {MAX_FREE_VERTICES}"
        )

    if len(free) == 0:
        identity = PermutationMap.identity(n)
        return gmp_objective(a, b, identity), [identity]

    edges = a.edge_pairs()
    b_adj = b.adjacency(dtype=np.int64)
    best = -1
    optima: List[np.ndarray] = []
    generator = permutations(range(len(free)))

    while True:
        batch = np.array(list(islice(generator, _BATCH)), dtype=np.int64).reshape(-1, len(free))
        if len(batch) == 0:
            break
        images = np.tile(np.arange(n), (len(batch), 1))
        images[:, free] = free[batch]
        if len(edges):
            values = 2 * b_adj[images[:, edges[:, 0]], images[:, edges[:, 1]]].sum(axis=1)
        else:
            values = np.zeros(len(batch), dtype=np.int64)
        top = int(values.max())
        if top > best:
            best = top
            optima = []
        if top == best:
            optima.extend(images[values == best])

    logger.debug(f"Brute force over {len(free)} free vertices: optimum {best}, {len(optima)} maximizers")
    return best, [PermutationMap(image) for image in optima]
