"""
Graph matching objective Tr(A P B P^T)
"""
import numpy as np

from ..errors import DimensionMismatchError
from .graph import Graph, pair_endpoints, pair_index
from .permutation import PermutationMap


def _check_dims(a: Graph, b: Graph, p: PermutationMap) -> None:
    if not (a.n == b.n == p.n):
        raise DimensionMismatchError(
            f"Sizes disagree: a.n={a.n}, b.n={b.n}, p.n={p.n}"
        )


def gmp_objective(a: Graph, b: Graph, p: PermutationMap) -> int:
    """
    Tr(A P B P^T) = sum_{i,j} A[i, j] * B[sigma(i), sigma(j)]

    Computed over unordered pairs, so the result is twice the number of
    edges of A that sigma maps onto edges of B.
    """
    _check_dims(a, b, p)
    if a.n < 2:
        return 0
    rows, cols = pair_endpoints(a.n)
    on = np.flatnonzero(a.edges)
    mapped = pair_index(p.image[rows[on]], p.image[cols[on]], a.n)
    return 2 * int(np.count_nonzero(b.edges[mapped]))


def objective_delta(a: Graph, b: Graph, p: PermutationMap) -> int:
    """Objective gain of p over the identity, Tr(A P B P^T) - Tr(A B)"""
    _check_dims(a, b, p)
    identity_value = 2 * int(np.count_nonzero(a.edges & b.edges))
    return gmp_objective(a, b, p) - identity_value


def frobenius_mismatch(a: Graph, b: Graph, p: PermutationMap) -> int:
    """||A - P B P^T||_F^2, minimized by exactly the maximizers of gmp_objective"""
    _check_dims(a, b, p)
    return 2 * (a.edge_count + b.edge_count) - gmp_objective(a, b, p)
