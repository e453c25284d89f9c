"""
Simple undirected graphs stored over the (n choose 2) unordered vertex pairs

Pair indexing: for 0 <= u < v < n,

    idx(u, v) = u * (2n - u - 1) / 2 + (v - u - 1)

which enumerates pairs row by row of the strict upper triangle, i.e. in the
same order as numpy.triu_indices(n, 1). Traces and enumerated chains depend
on this order, so it must not change.
"""
from functools import lru_cache
from typing import Iterable, Optional, Tuple

import numpy as np

from ..errors import DimensionMismatchError, InvalidParameterError


def num_pairs(n: int) -> int:
    """Number of unordered pairs of n vertices"""
    return n * (n - 1) // 2


def pair_index(u, v, n: int):
    """
    Index of the unordered pair {u, v}, u != v (scalars or arrays)

    Args:
        u: first endpoint(s)
        v: second endpoint(s)
        n: vertex count

    Returns:
        Pair index in [0, n choose 2)
    """
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    return lo * (2 * n - lo - 1) // 2 + (hi - lo - 1)


@lru_cache(maxsize=64)
def _endpoints(n: int) -> Tuple[np.ndarray, np.ndarray]:
    rows, cols = np.triu_indices(n, 1)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def pair_endpoints(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Arrays (u, v) with u < v for every pair index (read-only, cached)"""
    return _endpoints(n)


class Graph:
    """
    Simple undirected graph on n labeled vertices

    Edges are a boolean vector over unordered pairs, one entry per pair.
    No self-loops can be represented; symmetry holds by construction.
    ``vertex_ids`` keeps the original identifier of each dense vertex (used by
    ingestion and induced subgraphs; defaults to 0..n-1).
    """

    def __init__(
        self,
        n: int,
        edges: Optional[np.ndarray] = None,
        vertex_ids: Optional[np.ndarray] = None
    ):
        if n < 1:
            raise InvalidParameterError(f"Graph needs at least one vertex, got n={n}")
        self.n = int(n)
        size = num_pairs(self.n)

        if edges is None:
            edges = np.zeros(size, dtype=bool)
        else:
            edges = np.asarray(edges, dtype=bool).copy()
            if edges.shape != (size,):
                raise DimensionMismatchError(
                    f"Edge vector of shape {edges.shape} does not match n={n} ({size} pairs)"
                )
        self.edges = edges
        self._edge_count = int(np.count_nonzero(edges))

        if vertex_ids is None:
            vertex_ids = np.arange(self.n)
        vertex_ids = np.asarray(vertex_ids)
        if vertex_ids.shape != (self.n,):
            raise DimensionMismatchError("vertex_ids must have one entry per vertex")
        self.vertex_ids = vertex_ids

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edge_list(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        """Build from (u, v) pairs; self-loops are dropped and duplicates collapse"""
        graph = cls(n)
        pairs = np.array([(u, v) for u, v in edges if u != v], dtype=np.int64).reshape(-1, 2)
        if len(pairs):
            if pairs.min() < 0 or pairs.max() >= n:
                raise InvalidParameterError(f"Edge endpoint outside [0, {n})")
            graph.edges[pair_index(pairs[:, 0], pairs[:, 1], n)] = True
            graph._edge_count = int(np.count_nonzero(graph.edges))
        return graph

    @classmethod
    def from_adjacency(cls, adjacency: np.ndarray) -> "Graph":
        """Build from a symmetric 0/1 matrix; the diagonal is ignored"""
        adjacency = np.asarray(adjacency)
        if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
            raise DimensionMismatchError("Adjacency matrix must be square")
        if not np.array_equal(adjacency, adjacency.T):
            raise InvalidParameterError("Adjacency matrix must be symmetric")
        n = adjacency.shape[0]
        rows, cols = pair_endpoints(n)
        return cls(n, adjacency[rows, cols] != 0)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, np.ones(num_pairs(n), dtype=bool))

    def copy(self) -> "Graph":
        return Graph(self.n, self.edges, self.vertex_ids.copy())

    # -- queries ------------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def num_pairs(self) -> int:
        return self.edges.shape[0]

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return bool(self.edges[pair_index(u, v, self.n)])

    def edge_pairs(self) -> np.ndarray:
        """(m, 2) array of edges (u < v) in pair-index order"""
        rows, cols = pair_endpoints(self.n)
        on = np.flatnonzero(self.edges)
        return np.column_stack([rows[on], cols[on]])

    def adjacency(self, dtype=np.int64) -> np.ndarray:
        """Dense symmetric adjacency matrix"""
        matrix = np.zeros((self.n, self.n), dtype=dtype)
        rows, cols = pair_endpoints(self.n)
        matrix[rows, cols] = self.edges
        matrix[cols, rows] = self.edges
        return matrix

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)

    # -- mutation (single owner) -------------------------------------------

    def set_pair(self, index: int, value: bool) -> None:
        """Set the lamp of one pair index, keeping edge_count current"""
        old = bool(self.edges[index])
        if old != value:
            self.edges[index] = value
            self._edge_count += 1 if value else -1

    def flip(self, u: int, v: int) -> None:
        index = pair_index(u, v, self.n)
        self.set_pair(index, not self.edges[index])

    def recount(self) -> int:
        """Refresh the edge_count cache after bulk writes to ``edges``"""
        self._edge_count = int(np.count_nonzero(self.edges))
        return self._edge_count

    # -- transforms ---------------------------------------------------------

    def relabel(self, image: np.ndarray) -> "Graph":
        """
        Rename vertex i to image[i]

        The result B satisfies B[image[i], image[j]] = A[i, j], i.e. the
        matrix q A q^T for the permutation matrix of ``image``.
        """
        image = np.asarray(image)
        if image.shape != (self.n,):
            raise DimensionMismatchError("Relabeling must have one image per vertex")
        rows, cols = pair_endpoints(self.n)
        relabeled = Graph(self.n, vertex_ids=self.vertex_ids[np.argsort(image)])
        on = self.edges
        relabeled.edges[pair_index(image[rows[on]], image[cols[on]], self.n)] = True
        relabeled.recount()
        return relabeled

    def to_bytes(self) -> bytes:
        """Packed bit representation (stable, used for hashing and comparisons)"""
        return np.packbits(self.edges).tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edge_count={self.edge_count})"
