"""
Linear assignment with an exact lexicographic tie rule
"""
import logging
from collections import deque
from typing import List, Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import DimensionMismatchError, InvalidParameterError
from ..graph_core import PermutationMap

logger = logging.getLogger(__name__)


def _column_potentials(cost: np.ndarray, image: np.ndarray) -> np.ndarray:
    """
    Column duals v with c[i, j] - v[j] >= c[i, image[i]] - v[image[i]]

    Bellman-Ford on the residual graph of an optimal assignment; optimality
    rules out negative cycles, so at most n rounds are needed.
    """
    n = len(image)
    assigned = cost[np.arange(n), image]
    v = np.zeros(n)
    for _ in range(n + 1):
        candidate = (v[image] - assigned)[:, None] + cost
        relaxed = np.minimum(v, candidate.min(axis=0))
        if np.array_equal(relaxed, v):
            break
        v = relaxed
    return v


def _tight_columns(cost: np.ndarray, image: np.ndarray, tol: float) -> List[np.ndarray]:
    n = len(image)
    v = _column_potentials(cost, image)
    u = cost[np.arange(n), image] - v[image]
    reduced = cost - u[:, None] - v[None, :]
    threshold = tol * max(1.0, float(np.abs(cost).max()))
    return [np.flatnonzero(reduced[i] <= threshold) for i in range(n)]


def _reroute(tight, owner, image, fixed, row, start_row, freed_col, banned_col):
    """
    Alternating path from ``start_row`` to ``freed_col`` through unfixed rows

    Returns the list of (row, new column) reassignments, or None.
    """
    parent = {start_row: None}
    via = {}
    queue = deque([start_row])
    while queue:
        r = queue.popleft()
        for c in tight[r]:
            c = int(c)
            if c == banned_col or fixed[c]:
                continue
            if c == freed_col:
                path = [(r, c)]
                while parent[r] is not None:
                    prev = parent[r]
                    path.append((prev, via[r]))
                    r = prev
                return path
            nxt = owner[c]
            if nxt <= row or nxt in parent:
                continue
            parent[nxt] = r
            via[nxt] = c
            queue.append(nxt)
    return None


def _lexicographic_optimum(cost: np.ndarray, image: np.ndarray, tol: float) -> np.ndarray:
    """Lexicographically smallest image vector among optimal assignments"""
    n = len(image)
    tight = _tight_columns(cost, image, tol)
    image = image.copy()
    owner = np.empty(n, dtype=np.int64)
    owner[image] = np.arange(n)
    fixed = np.zeros(n, dtype=bool)  # columns taken by rows already decided

    for row in range(n):
        current = int(image[row])
        for col in tight[row]:
            col = int(col)
            if col >= current:
                break
            if fixed[col]:
                continue
            holder = int(owner[col])
            path = _reroute(tight, owner, image, fixed, row, holder, current, col)
            if path is None:
                continue
            image[row] = col
            owner[col] = row
            for r, c in path:
                image[r] = c
                owner[c] = r
            break
        fixed[image[row]] = True
    return image


def lap_solve(cost: np.ndarray, tie_break: bool = True, tol: float = 1e-9) -> PermutationMap:
    """
    Minimum-cost assignment of rows to columns

    Args:
        cost: square matrix of finite costs
        tie_break: return the lexicographically smallest optimal image
            vector (exact, via tight edges of an optimal dual); when False
            the solver's own optimum is returned
        tol: relative slack for treating a reduced cost as zero

    Returns:
        PermutationMap sending row i to its assigned column
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise DimensionMismatchError(f"Cost matrix must be square, got shape {cost.shape}")
    if not np.all(np.isfinite(cost)):
        raise InvalidParameterError("Cost matrix has non-finite entries")
    n = cost.shape[0]
    if n == 0:
        return PermutationMap.identity(0)

    _, cols = linear_sum_assignment(cost)
    if tie_break:
        cols = _lexicographic_optimum(cost, cols, tol)
    return PermutationMap(cols)


def assignment_cost(cost: np.ndarray, p: PermutationMap) -> float:
    cost = np.asarray(cost, dtype=float)
    return float(cost[np.arange(p.n), p.image].sum())
