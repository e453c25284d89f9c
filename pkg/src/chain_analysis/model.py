"""
Explicit Markov chain models for tiny edgelighter instances
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy import sparse

from ..errors import DimensionMismatchError

# Enumerations beyond this many states are refused
MAX_STATES = 100_000


@dataclass(frozen=True)
class ChainModel:
    """
    Enumerated chain with its transition matrix and closed-form stationary law

    States are listed in lexicographic (community, position, configuration)
    order. A configuration is an integer whose bit (C - 1 - p) is the lamp of
    pair index p, C = n choose 2, so integer order is lexicographic order of
    the lamp vector.

    Attributes:
        kind: "standard" or "block"
        n: vertex count
        positions: walker position of each state
        configs: configuration integer of each state
        communities: walker community of each state (block chains)
        transition: row-stochastic sparse matrix
        stationary: closed-form stationary vector
    """
    kind: str
    n: int
    positions: np.ndarray
    configs: np.ndarray
    transition: sparse.csr_matrix
    stationary: np.ndarray
    communities: Optional[np.ndarray] = None
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        size = len(self.positions)
        if self.transition.shape != (size, size) or self.stationary.shape != (size,):
            raise DimensionMismatchError("Transition matrix, stationary vector and states disagree")

    @property
    def num_states(self) -> int:
        return len(self.positions)

    @property
    def num_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    def dense(self) -> np.ndarray:
        return self.transition.toarray()

    def lamp(self, pair: int) -> np.ndarray:
        """Lamp value of one pair index in every state"""
        return (self.configs >> (self.num_pairs - 1 - pair)) & 1

    def row_sum_error(self) -> float:
        return float(np.abs(np.asarray(self.transition.sum(axis=1)).ravel() - 1.0).max())

    def stationarity_error(self, pi: Optional[np.ndarray] = None) -> float:
        """||pi P - pi||_1"""
        pi = self.stationary if pi is None else pi
        return float(np.abs(self.transition.T @ pi - pi).sum())

    def detailed_balance_residual(self, pi: Optional[np.ndarray] = None) -> float:
        """max |pi(x) P(x, y) - pi(y) P(y, x)| over all state pairs"""
        pi = self.stationary if pi is None else pi
        flow = sparse.diags(pi) @ self.transition
        return float(abs(flow - flow.T).max()) if flow.nnz else 0.0


def config_bits(configs: np.ndarray, num_pairs: int) -> np.ndarray:
    """(states, C) 0/1 lamp matrix in pair-index order"""
    shifts = np.arange(num_pairs - 1, -1, -1, dtype=np.int64)
    return (np.asarray(configs, dtype=np.int64)[:, None] >> shifts) & 1


def pair_bit(pair: int, num_pairs: int) -> int:
    return 1 << (num_pairs - 1 - pair)
