"""
Global edgelighter walk: each step resamples the lamp of a uniform pair

Used as the comparison process for traversal probabilities. Every step
covers one pair; the walker position is carried along unchanged.
"""
import logging
from typing import Optional

import numpy as np

from ..graph_core import Graph, RngStream
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


class GlobalWalk(BaseWalk):
    draws_per_step = 2

    def __init__(self, n: int, params: StandardWalkParams):
        super().__init__(n)
        self.params = params

    def initial_state(self, g0: Graph, rng: RngStream, position: Optional[int] = None) -> WalkState:
        return WalkState(
            graph=g0.copy(),
            position=0 if position is None else int(position),
            step=0,
            cover=CoverTracker(g0.num_pairs)
        )

    def _advance(self, state: WalkState, uniforms: np.ndarray) -> None:
        k = len(uniforms)
        pairs = draw_index(uniforms[:, 0], state.graph.num_pairs)
        edges = state.graph.edges
        for round_steps in occurrence_rounds(pairs):
            round_pairs = pairs[round_steps]
            edges[round_pairs] = resample_lamps(
                edges[round_pairs], uniforms[round_steps, 1], self.params.q1, self.params.q2
            )
        state.graph.recount()
        state.cover.mark_batch(pairs, state.step + 1 + np.arange(k))
        state.step += k


def step_global(state: WalkState, params: StandardWalkParams, rng: RngStream) -> WalkState:
    """Take one global edgelighter step in place"""
    return GlobalWalk(state.graph.n, params).advance(state, 1, rng)
