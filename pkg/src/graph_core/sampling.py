"""
Random graph models: Erdos-Renyi and stochastic block model
"""
import logging
from typing import Tuple

import numpy as np

from ..errors import InvalidParameterError
from .graph import Graph, num_pairs, pair_endpoints
from .partition import Partition, SbmParams
from .rng import RngStream

logger = logging.getLogger(__name__)


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise InvalidParameterError(f"{name} must be in [0, 1], got {value}")


def sample_er(n: int, p: float, rng: RngStream) -> Graph:
    """
    Sample G(n, p): every unordered pair present independently with probability p

    Args:
        n: vertex count (>= 1)
        p: edge probability
        rng: random stream (consumes exactly n choose 2 uniforms)

    Returns:
        Sampled graph
    """
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    _check_probability("p", p)
    edges = rng.uniforms(num_pairs(n)) < p
    graph = Graph(n, edges)
    logger.debug(f"Sampled ER(n={n}, p={p}) with {graph.edge_count} edges")
    return graph


def sample_sbm(params: SbmParams, rng: RngStream) -> Tuple[Graph, Partition]:
    """
    Sample an SBM graph with contiguous community blocks

    Args:
        params: community sizes and block probability matrix
        rng: random stream (consumes exactly n choose 2 uniforms)

    Returns:
        (graph, partition)
    """
    partition = params.partition()
    n = partition.n
    rows, cols = pair_endpoints(n)
    labels = partition.labels
    probs = params.lam[labels[rows], labels[cols]]
    edges = rng.uniforms(num_pairs(n)) < probs
    graph = Graph(n, edges)
    logger.debug(f"Sampled SBM(sizes={list(params.sizes)}) with {graph.edge_count} edges")
    return graph, partition
