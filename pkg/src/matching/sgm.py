"""
Seeded graph matching by Frank-Wolfe ascent (FAQ)

Maximizes f(D) = Tr(A D B D^T) over doubly stochastic D whose seed rows and
columns are pinned to the identity. Only the free block of D is stored.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..config import InitMethod, SolverOptions
from ..errors import DimensionMismatchError
from ..graph_core import Graph, PermutationMap, RngStream, gmp_objective
from .assignment import lap_solve
from .types import MatchResult, SeedSet

logger = logging.getLogger(__name__)


def sinkhorn(matrix: np.ndarray, tol: float = 1e-3, max_iterations: int = 1000) -> np.ndarray:
    """Scale a positive matrix to (approximately) doubly stochastic"""
    c = 1.0 / matrix.sum(axis=0)
    r = 1.0 / (matrix @ c)
    scaled = matrix
    for _ in range(max_iterations):
        if (np.abs(scaled.sum(axis=1) - 1) < tol).all() and (np.abs(scaled.sum(axis=0) - 1) < tol).all():
            break
        c = 1.0 / (r @ matrix)
        r = 1.0 / (matrix @ c)
        scaled = r[:, None] * matrix * c
    return scaled


def _split(matrix: np.ndarray, s: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    upper, lower = matrix[:s], matrix[s:]
    return upper[:, :s], upper[:, s:], lower[:, :s], lower[:, s:]


@dataclass
class _Problem:
    """Reordered instance: seeds first, then free vertices"""
    order: np.ndarray
    m: int
    const: np.ndarray
    a22: np.ndarray
    b22: np.ndarray
    c0: float

    def objective(self, d: np.ndarray) -> float:
        """f restricted to the free block"""
        return float(self.c0 + (self.const * d).sum() + ((self.a22 @ d @ self.b22.T) * d).sum())

    def gradient(self, d: np.ndarray) -> np.ndarray:
        return self.const + self.a22 @ d @ self.b22.T + self.a22.T @ d @ self.b22


def _prepare(a: Graph, b: Graph, seeds: SeedSet) -> _Problem:
    n = a.n
    seed_ids = seeds.seeds
    free = seeds.free(n)
    order = np.concatenate([seed_ids, free])
    s = len(seed_ids)
    a_mat = a.adjacency(dtype=float)[np.ix_(order, order)]
    b_mat = b.adjacency(dtype=float)[np.ix_(order, order)]
    a11, a12, a21, a22 = _split(a_mat, s)
    b11, b12, b21, b22 = _split(b_mat, s)
    # <A, D B D^T> with D = diag(I, X) expands to
    # <A11, B11> + <A21 B21^T + A12^T B12, X> + <A22 X B22^T, X>
    const = a21 @ b21.T + a12.T @ b12
    return _Problem(
        order=order,
        m=len(free),
        const=const,
        a22=a22,
        b22=b22,
        c0=float((a11 * b11).sum())
    )


def _initial(method: InitMethod, m: int, rng: Optional[RngStream]) -> np.ndarray:
    if method == InitMethod.IDENTITY:
        return np.eye(m)
    barycenter = np.full((m, m), 1.0 / m)
    if method == InitMethod.BARYCENTER:
        return barycenter
    if rng is None:
        raise ValueError("Random initialization needs an RngStream")
    return (barycenter + sinkhorn(rng.uniforms((m, m)) + 1e-12)) / 2


def _line_search(gain_linear: float, gain_quadratic: float) -> float:
    """argmax over [0, 1] of a * alpha^2 + b * alpha"""
    a, b = gain_quadratic, gain_linear
    if a < 0:
        return float(np.clip(-b / (2 * a), 0.0, 1.0))
    return 1.0 if a + b > 0 else 0.0


def _ascend(problem: _Problem, start: np.ndarray, opts: SolverOptions):
    d = start
    trace = [problem.objective(d)]
    converged = False
    iterations = 0
    for iterations in range(1, opts.max_iterations + 1):
        grad = problem.gradient(d)
        direction = lap_solve(-grad, tie_break=False)
        q = np.zeros_like(d)
        q[np.arange(problem.m), direction.image] = 1.0
        delta = q - d
        b = float((grad * delta).sum())
        a = float(((problem.a22 @ delta @ problem.b22.T) * delta).sum())
        alpha = _line_search(b, a)
        gain = alpha * b + alpha * alpha * a
        step = alpha * np.linalg.norm(delta) / np.sqrt(problem.m)
        if alpha > 0:
            d = d + alpha * delta
        trace.append(problem.objective(d))
        if step < opts.tolerance or gain < opts.tolerance:
            converged = True
            break
    return d, trace, iterations, converged


def sgm_faq(
    a: Graph,
    b: Graph,
    seeds: Optional[SeedSet] = None,
    opts: Optional[SolverOptions] = None,
    rng: Optional[RngStream] = None
) -> MatchResult:
    """
    Seeded graph matching via Frank-Wolfe on the doubly stochastic relaxation

    Each iteration solves a linear assignment on the negated gradient of the
    free block, takes the exact maximizing step along the segment, and stops
    when the step or the objective gain falls below the tolerance. The free
    block is then projected to a permutation by a linear assignment and the
    objective is recomputed exactly.

    Args:
        a: first graph
        b: second graph
        seeds: vertices pinned to themselves
        opts: solver options (init, max_iterations, tolerance, restarts)
        rng: stream for random initializations (restarts after the first);
            without one, restart r draws from RngStream(0, r)

    Returns:
        MatchResult with the best permutation over all restarts
    """
    if a.n != b.n:
        raise DimensionMismatchError(f"Graphs differ in size: {a.n} vs {b.n}")
    seeds = seeds or SeedSet.empty()
    opts = opts or SolverOptions()
    opts.validate()
    n = a.n

    problem = _prepare(a, b, seeds)
    if problem.m == 0:
        identity = PermutationMap.identity(n)
        return MatchResult(
            permutation=identity,
            objective=gmp_objective(a, b, identity),
            correctness=1.0,
            iterations=0,
            converged=True,
            solver="faq"
        )

    best: Optional[Tuple[int, PermutationMap, List[float], int, bool]] = None
    for restart in range(opts.restarts):
        method = opts.init if restart == 0 else InitMethod.RANDOM
        restart_rng = None if rng is None else rng.derive("faq-restart", restart)
        if method == InitMethod.RANDOM and restart_rng is None:
            logger.debug(f"FAQ restart {restart}: no RngStream given, using the fixed stream (0, {restart})")
            restart_rng = RngStream(0, restart)
        start = _initial(method, problem.m, restart_rng)
        d, trace, iterations, converged = _ascend(problem, start, opts)

        projection = lap_solve(-d, tie_break=False)
        image = np.arange(n)
        image[problem.order[len(seeds):]] = problem.order[len(seeds):][projection.image]
        permutation = PermutationMap(image)
        value = gmp_objective(a, b, permutation)
        logger.debug(f"FAQ restart {restart} ({method.value}): objective {value}, {iterations} iterations")
        if best is None or value > best[0]:
            best = (value, permutation, trace, iterations, converged)

    value, permutation, trace, iterations, converged = best
    free = problem.order[len(seeds):]
    return MatchResult(
        permutation=permutation,
        objective=value,
        correctness=float(np.mean(permutation.image[free] == free)),
        iterations=iterations,
        converged=converged,
        objective_trace=trace,
        solver="faq"
    )
