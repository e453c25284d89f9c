"""
Exhaustive enumeration of edgelighter chains on tiny graphs
"""
import logging
from itertools import combinations
from math import comb
from typing import List

import numpy as np
from scipy import sparse

from ..edgelighter import BlockWalkParams, StandardWalkParams
from ..edgelighter.block import build_cross_blocks
from ..errors import DimensionMismatchError, InstanceTooLargeError, ReducibleChainError
from ..graph_core import Graph, Partition, num_pairs, pair_endpoints, pair_index
from .model import MAX_STATES, ChainModel, config_bits, pair_bit

logger = logging.getLogger(__name__)


def check_standard_params(params: StandardWalkParams) -> None:
    """Refuse parameters that make the standard chain reducible"""
    q1, q2 = params.q1, params.q2
    if q1 == 0.0 or q2 == 0.0:
        raise ReducibleChainError(
            f"q1={q1}, q2={q2}: a zero lamp probability traps the configuration"
        )
    if q1 == 1.0 and q2 == 1.0:
        raise ReducibleChainError(
            "q1 = q2 = 1 makes every traversal a deterministic flip; the odd-degree "
            "set XOR the walker position is conserved"
        )


def standard_state_count(n: int) -> int:
    return n * 2 ** num_pairs(n)


def _standard_stationary(n: int, params: StandardWalkParams, configs: np.ndarray) -> np.ndarray:
    c = num_pairs(n)
    on = config_bits(configs, c).sum(axis=1)
    log_weight = on * np.log(params.q2) + (c - on) * np.log(params.q1)
    weight = np.exp(log_weight - log_weight.max())
    pi = np.tile(weight, n)
    return pi / pi.sum()


def enumerate_standard_chain(n: int, params: StandardWalkParams, max_states: int = MAX_STATES) -> ChainModel:
    """
    Full transition matrix of the standard edgelighter chain on n vertices

    States are (position, configuration) with index position * 2^C + config.
    From (u, c): each v is chosen with probability 1/n; v = u keeps the state;
    otherwise the lamp on {u, v} is resampled with (q1, q2).

    Args:
        n: vertex count (n * 2^(n choose 2) states must fit the cap)
        params: lamp probabilities
        max_states: enumeration cap

    Returns:
        ChainModel whose stationary vector is the closed form (NaN when a
        lamp probability is zero)
    """
    if n < 2:
        raise InstanceTooLargeError(f"Standard chain needs n >= 2, got n={n}")
    size = standard_state_count(n)
    if size > max_states:
        raise InstanceTooLargeError(f"n={n} has {size} states (cap {max_states})")

    c = num_pairs(n)
    configs = np.arange(2 ** c, dtype=np.int64)
    rows, cols, vals = [], [], []
    q1, q2 = params.q1, params.q2

    for u in range(n):
        source = u * 2 ** c + configs
        for v in range(n):
            target_base = v * 2 ** c
            if v == u:
                rows.append(source)
                cols.append(source)
                vals.append(np.full(len(configs), 1.0 / n))
                continue
            bit = pair_bit(int(pair_index(u, v, n)), c)
            on = (configs & bit) != 0
            keep = np.where(on, 1.0 - q1, 1.0 - q2) / n
            flip = np.where(on, q1, q2) / n
            rows += [source, source]
            cols += [target_base + configs, target_base + (configs ^ bit)]
            vals += [keep, flip]

    transition = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size)
    )
    transition.sum_duplicates()
    transition.eliminate_zeros()

    positions = np.repeat(np.arange(n), 2 ** c)
    all_configs = np.tile(configs, n)
    if q1 > 0 and q2 > 0:
        pi = _standard_stationary(n, params, configs)
    else:
        pi = np.full(size, np.nan)
    logger.debug(f"Enumerated standard chain n={n}: {size} states, {transition.nnz} transitions")
    return ChainModel(
        kind="standard",
        n=n,
        positions=positions,
        configs=all_configs,
        transition=transition,
        stationary=pi,
        meta={'q1': q1, 'q2': q2}
    )


def stationary_standard(n: int, params: StandardWalkParams, max_states: int = MAX_STATES) -> np.ndarray:
    """
    Closed-form stationary law pi(u, c) proportional to (1/n) q2^{#on} q1^{#off}

    Returns:
        Probability vector in enumeration order
    """
    check_standard_params(params)
    size = standard_state_count(n)
    if size > max_states:
        raise InstanceTooLargeError(f"n={n} has {size} states (cap {max_states})")
    return _standard_stationary(n, params, np.arange(2 ** num_pairs(n), dtype=np.int64))


# -- block chain ---------------------------------------------------------------

def _block_configs(g0: Graph, partition: Partition) -> np.ndarray:
    """All configurations with free within-community lamps and fixed cross counts"""
    c = num_pairs(g0.n)
    rows, cols = pair_endpoints(g0.n)
    within = np.flatnonzero(partition.labels[rows] == partition.labels[cols])

    within_bits = [pair_bit(int(p), c) for p in within]
    within_masks = np.zeros(1, dtype=np.int64)
    for bit in within_bits:
        within_masks = np.concatenate([within_masks, within_masks | bit])

    cross_masks = np.zeros(1, dtype=np.int64)
    for block in build_cross_blocks(g0, partition).values():
        options = np.array(
            [sum(pair_bit(p, c) for p in chosen) for chosen in combinations(sorted(block.pairs), block.m)],
            dtype=np.int64
        )
        cross_masks = (cross_masks[:, None] | options[None, :]).ravel()

    return np.unique((within_masks[:, None] | cross_masks[None, :]).ravel())


def block_state_count(g0: Graph, partition: Partition) -> int:
    """Size of the restricted block-chain state space"""
    rows, cols = pair_endpoints(g0.n)
    within = int(np.count_nonzero(partition.labels[rows] == partition.labels[cols]))
    count = g0.n * 2 ** within
    for block in build_cross_blocks(g0, partition).values():
        count *= comb(block.size, block.m)
    return count


def check_block_params(partition: Partition, params: BlockWalkParams) -> None:
    if partition.k < 2:
        raise ReducibleChainError(
            "The block chain needs K >= 2; with K = 1 it is the standard chain on the block"
        )
    if params.k != partition.k:
        raise DimensionMismatchError(
            f"BlockWalkParams has {params.k} communities, partition has {partition.k}"
        )
    for i, size in enumerate(partition.sizes):
        if size >= 2:
            check_standard_params(params.community(i))


def _block_stationary(
    g0: Graph,
    partition: Partition,
    params: BlockWalkParams,
    positions: np.ndarray,
    configs: np.ndarray
) -> np.ndarray:
    c = num_pairs(g0.n)
    rows, cols = pair_endpoints(g0.n)
    bits = config_bits(configs, c)
    labels = partition.labels
    log_weight = -np.log(partition.k) - np.log(partition.sizes[labels[positions]].astype(float))
    for j in range(partition.k):
        pairs_j = np.flatnonzero((labels[rows] == j) & (labels[cols] == j))
        if len(pairs_j) == 0:
            continue
        on = bits[:, pairs_j].sum(axis=1)
        off = len(pairs_j) - on
        log_weight = log_weight + on * np.log(params.q_off_to_on[j]) + off * np.log(params.q_on_to_off[j])
    weight = np.exp(log_weight - log_weight.max())
    return weight / weight.sum()


def _block_layout(g0: Graph, partition: Partition):
    configs = _block_configs(g0, partition)
    order: List[int] = []
    for i in range(partition.k):
        order += partition.members(i).tolist()
    positions = np.repeat(np.array(order, dtype=np.int64), len(configs))
    all_configs = np.tile(configs, len(order))
    return configs, order, positions, all_configs


def enumerate_block_chain(
    g0: Graph,
    partition: Partition,
    params: BlockWalkParams,
    max_states: int = MAX_STATES
) -> ChainModel:
    """
    Full transition matrix of the block chain on the restricted state space

    The state space fixes every cross count m_ij at its value in g0. States
    are (community, position, configuration) in lexicographic order.

    Transition probabilities from (i, u, c):
      - stay (1/2): v uniform in B_i, lamp on {u, v} resampled with (q_{i;1}, q_{i;2})
      - leave (1/2): j uniform among the K - 1 other communities; one cross
        edge e1 and one cross non-edge e2 chosen with probability
        1/(m_ij (n_i n_j - m_ij)) are swapped (skipped if m_ij is 0 or
        n_i n_j); w uniform in B_j
    """
    check_block_params(partition, params)
    if g0.n != partition.n:
        raise DimensionMismatchError("Graph and partition sizes disagree")
    size = block_state_count(g0, partition)
    if size > max_states:
        raise InstanceTooLargeError(f"Restricted block chain has {size} states (cap {max_states})")

    c = num_pairs(g0.n)
    configs, order, positions, all_configs = _block_layout(g0, partition)
    per_position = len(configs)
    slot = {u: s for s, u in enumerate(order)}
    members = partition.all_members()
    labels = partition.labels
    k = partition.k
    blocks = build_cross_blocks(g0, partition)

    def index_of(u: int, target_configs: np.ndarray) -> np.ndarray:
        return slot[u] * per_position + np.searchsorted(configs, target_configs)

    rows, cols, vals = [], [], []
    for u in order:
        i = int(labels[u])
        source = slot[u] * per_position + np.arange(per_position)
        n_i = len(members[i])
        q1 = params.q_on_to_off[i]
        q2 = params.q_off_to_on[i]

        for v in members[i].tolist():
            if v == u:
                rows.append(source)
                cols.append(source)
                vals.append(np.full(per_position, 0.5 / n_i))
                continue
            bit = pair_bit(int(pair_index(u, v, g0.n)), c)
            on = (configs & bit) != 0
            rows += [source, source]
            cols += [index_of(v, configs), index_of(v, configs ^ bit)]
            vals += [np.where(on, 1.0 - q1, 1.0 - q2) * 0.5 / n_i, np.where(on, q1, q2) * 0.5 / n_i]

        for j in range(k):
            if j == i:
                continue
            n_j = len(members[j])
            block = blocks[(min(i, j), max(i, j))]
            leave = 0.5 / (k - 1) / n_j
            if block.swappable:
                swap = 1.0 / (block.m * (block.size - block.m))
                for e1 in block.pairs:
                    b1 = pair_bit(e1, c)
                    for e2 in block.pairs:
                        b2 = pair_bit(e2, c)
                        valid = np.flatnonzero(((configs & b1) != 0) & ((configs & b2) == 0))
                        if len(valid) == 0:
                            continue
                        swapped = configs[valid] ^ b1 ^ b2
                        for w in members[j].tolist():
                            rows.append(source[valid])
                            cols.append(index_of(w, swapped))
                            vals.append(np.full(len(valid), leave * swap))
            else:
                for w in members[j].tolist():
                    rows.append(source)
                    cols.append(index_of(w, configs))
                    vals.append(np.full(per_position, leave))

    transition = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size)
    )
    transition.sum_duplicates()
    transition.eliminate_zeros()

    pi = _block_stationary(g0, partition, params, positions, all_configs)
    logger.debug(f"Enumerated block chain: {size} states, {transition.nnz} transitions")
    return ChainModel(
        kind="block",
        n=g0.n,
        positions=positions,
        configs=all_configs,
        transition=transition,
        stationary=pi,
        communities=labels[positions],
        meta={
            'partition': partition,
            'cross_counts': {key: block.m for key, block in blocks.items()},
        }
    )


def stationary_block(g0: Graph, partition: Partition, params: BlockWalkParams,
                     max_states: int = MAX_STATES) -> np.ndarray:
    """
    Closed-form stationary law on the restricted block state space

    pi(B_i, u, c) proportional to (1/K)(1/|B_i|) prod_j q_{j;2}^{on_j(c)} q_{j;1}^{off_j(c)},
    where on_j/off_j count lit/unlit pairs inside community j. The cross
    binomial factors are constant on the restricted space and cancel.
    """
    check_block_params(partition, params)
    size = block_state_count(g0, partition)
    if size > max_states:
        raise InstanceTooLargeError(f"Restricted block chain has {size} states (cap {max_states})")
    _, _, positions, all_configs = _block_layout(g0, partition)
    return _block_stationary(g0, partition, params, positions, all_configs)
