"""
Block edgelighter walk

With probability 1/2 the walker stays in its community B_i and performs a
standard step there with (q_{i;1}, q_{i;2}). Otherwise it leaves: it picks a
uniform other community B_j, swaps one uniform cross-(i, j) edge off and one
uniform cross-(i, j) non-edge on, then moves to a uniform w in B_j. Cross
edge counts m_ij never change.

If the cross-(i, j) bipartite graph has no edges or no non-edges the swap is
skipped and only the move happens.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import DimensionMismatchError
from ..graph_core import Graph, Partition, RngStream, pair_endpoints, pair_index
from .base import BaseWalk, BlockWalkParams, CoverTracker, WalkState, draw_index

logger = logging.getLogger(__name__)

_CACHE_KEY = "block_index"


@dataclass
class CrossBlock:
    """Pair indices between two communities, edges first (positions < m)"""
    pairs: List[int]
    m: int

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def swappable(self) -> bool:
        return 0 < self.m < len(self.pairs)


def build_cross_blocks(graph: Graph, partition: Partition) -> Dict[Tuple[int, int], CrossBlock]:
    """Cross-community pair lists for every community pair i < j"""
    members = partition.all_members()
    blocks = {}
    for i in range(partition.k):
        for j in range(i + 1, partition.k):
            pairs = np.sort(pair_index(members[i][:, None], members[j][None, :], graph.n).ravel())
            on = graph.edges[pairs]
            ordered = np.concatenate([pairs[on], pairs[~on]])
            blocks[(i, j)] = CrossBlock(ordered.tolist(), int(np.count_nonzero(on)))
    return blocks


def cross_edge_counts(graph: Graph, partition: Partition) -> np.ndarray:
    """K x K matrix of m_ij (diagonal: within-community edge counts)"""
    rows, cols = pair_endpoints(graph.n)
    labels = partition.labels
    counts = np.zeros((partition.k, partition.k), dtype=np.int64)
    on = graph.edges
    np.add.at(counts, (labels[rows[on]], labels[cols[on]]), 1)
    off_diagonal = counts + counts.T
    np.fill_diagonal(off_diagonal, np.diag(counts))
    return off_diagonal


def coverable_pairs(graph: Graph, partition: Partition) -> np.ndarray:
    """Within-community pairs plus cross pairs of swappable community pairs"""
    rows, cols = pair_endpoints(graph.n)
    mask = partition.labels[rows] == partition.labels[cols]
    for block in build_cross_blocks(graph, partition).values():
        if block.swappable:
            mask[block.pairs] = True
    return mask


class BlockWalk(BaseWalk):
    """Block edgelighter walk; five uniforms per step"""

    draws_per_step = 5

    def __init__(self, partition: Partition, params: BlockWalkParams):
        super().__init__(partition.n)
        if params.k != partition.k:
            raise DimensionMismatchError(
                f"BlockWalkParams has {params.k} communities, partition has {partition.k}"
            )
        self.partition = partition
        self.params = params
        self._members = [m.tolist() for m in partition.all_members()]

    def initial_state(self, g0: Graph, rng: RngStream, position: Optional[int] = None) -> WalkState:
        if g0.n != self.partition.n:
            raise DimensionMismatchError("Graph and partition sizes disagree")
        if position is None:
            first, second = rng.uniforms(2)
            community = int(draw_index(np.array([first]), self.partition.k)[0])
            members = self._members[community]
            position = members[int(draw_index(np.array([second]), len(members))[0])]
        position = int(position)
        graph = g0.copy()
        state = WalkState(
            graph=graph,
            position=position,
            step=0,
            cover=CoverTracker(graph.num_pairs, coverable_pairs(graph, self.partition)),
            community=int(self.partition.labels[position])
        )
        return state

    def _blocks(self, state: WalkState) -> Dict[Tuple[int, int], CrossBlock]:
        if _CACHE_KEY not in state.cache:
            state.cache[_CACHE_KEY] = build_cross_blocks(state.graph, self.partition)
        return state.cache[_CACHE_KEY]

    def chunk_size(self, state: WalkState) -> int:
        return 4096

    def _advance(self, state: WalkState, uniforms: np.ndarray) -> None:
        blocks = self._blocks(state)
        graph = state.graph
        edges = graph.edges
        cover = state.cover
        members = self._members
        q1 = self.params.q_on_to_off
        q2 = self.params.q_off_to_on
        k = self.partition.k
        two_n = 2 * graph.n

        u = state.position
        i = state.community
        step = state.step
        for d0, d1, d2, d3, d4 in uniforms.tolist():
            step += 1
            if k == 1 or d0 < 0.5:
                inside = members[i]
                v = inside[min(int(d1 * len(inside)), len(inside) - 1)]
                if v != u:
                    lo, hi = (u, v) if u < v else (v, u)
                    pair = lo * (two_n - lo - 1) // 2 + (hi - lo - 1)
                    lamp = (d2 >= q1[i]) if edges[pair] else (d2 < q2[i])
                    graph.set_pair(pair, lamp)
                    cover.mark(pair, step)
                u = v
            else:
                j = min(int(d1 * (k - 1)), k - 2)
                if j >= i:
                    j += 1
                block = blocks[(i, j) if i < j else (j, i)]
                if block.swappable:
                    m = block.m
                    a = min(int(d2 * m), m - 1)
                    b = m + min(int(d3 * (block.size - m)), block.size - m - 1)
                    e_off = block.pairs[a]
                    e_on = block.pairs[b]
                    edges[e_off] = False
                    edges[e_on] = True
                    block.pairs[a] = e_on
                    block.pairs[b] = e_off
                    cover.mark(e_off, step)
                    cover.mark(e_on, step)
                target = members[j]
                u = target[min(int(d4 * len(target)), len(target) - 1)]
                i = j

        state.position = u
        state.community = i
        state.step = step


def step_block(
    state: WalkState,
    params: BlockWalkParams,
    partition: Partition,
    rng: RngStream
) -> WalkState:
    """
    Take one block edgelighter step in place

    Args:
        state: live walk state (community must match the position's label)
        params: per-community lamp probabilities
        partition: community structure
        rng: stream for the step's five uniforms

    Returns:
        The updated state
    """
    if state.community is None:
        state.community = int(partition.labels[state.position])
    return BlockWalk(partition, params).advance(state, 1, rng)
