"""
Standard edgelighter walk

Each step the walker at u jumps to a uniform v in V. If v != u the lamp on
{u, v} is resampled: an edge turns off with probability q1 and a non-edge
turns on with probability q2. A self-jump changes nothing.
"""
import logging
from typing import Optional

import numpy as np

from ..graph_core import Graph, RngStream, pair_index
from .base import (
    BaseWalk,
    CoverTracker,
    StandardWalkParams,
    WalkState,
    draw_index,
    occurrence_rounds,
    resample_lamps,
)

logger = logging.getLogger(__name__)


class StandardWalk(BaseWalk):
    """Standard edgelighter walk; two uniforms per step (target, lamp)"""

    draws_per_step = 2

    def __init__(self, n: int, params: StandardWalkParams):
        super().__init__(n)
        self.params = params

    def initial_state(self, g0: Graph, rng: RngStream, position: Optional[int] = None) -> WalkState:
        if position is None:
            position = int(draw_index(rng.uniforms(1), g0.n)[0])
        return WalkState(
            graph=g0.copy(),
            position=int(position),
            step=0,
            cover=CoverTracker(g0.num_pairs)
        )

    def _advance(self, state: WalkState, uniforms: np.ndarray) -> None:
        k = len(uniforms)
        n = state.graph.n
        targets = draw_index(uniforms[:, 0], n)
        sources = np.empty(k, dtype=np.int64)
        sources[0] = state.position
        sources[1:] = targets[:-1]

        moved = np.flatnonzero(sources != targets)
        pairs = pair_index(sources[moved], targets[moved], n)
        lamp_draws = uniforms[moved, 1]

        edges = state.graph.edges
        q1, q2 = self.params.q1, self.params.q2
        for round_steps in occurrence_rounds(pairs):
            round_pairs = pairs[round_steps]
            edges[round_pairs] = resample_lamps(edges[round_pairs], lamp_draws[round_steps], q1, q2)
        state.graph.recount()

        state.cover.mark_batch(pairs, state.step + 1 + moved)
        state.position = int(targets[-1])
        state.step += k


def step_standard(state: WalkState, params: StandardWalkParams, rng: RngStream) -> WalkState:
    """
    Take one standard edgelighter step in place

    Args:
        state: live walk state
        params: lamp probabilities (q1, q2)
        rng: stream for the step's two uniforms

    Returns:
        The updated state
    """
    return StandardWalk(state.graph.n, params).advance(state, 1, rng)
