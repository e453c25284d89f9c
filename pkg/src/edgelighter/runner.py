"""
Driving a walk through checkpoints
"""
import logging
from typing import Callable, List, Optional, Union

from ..config import WalkKind
from ..errors import InvalidParameterError
from ..graph_core import Graph, Partition, RngStream
from .base import WalkState
from .factory import WalkFactory, WalkParams

logger = logging.getLogger(__name__)

# Called at every checkpoint with the live state; returning True stops the walk
Observer = Callable[[WalkState], Optional[bool]]


def run_walk(
    g0: Graph,
    kind: Union[WalkKind, str],
    params: WalkParams,
    steps: int,
    checkpoint_every: int,
    observer: Optional[Observer],
    rng: RngStream,
    partition: Optional[Partition] = None,
    keep_snapshots: bool = True,
    position: Optional[int] = None
) -> List[WalkState]:
    """
    Run a walk from g0 for up to ``steps`` steps

    Checkpoints are step 0 and every multiple of ``checkpoint_every``. At each
    checkpoint a snapshot is kept (if ``keep_snapshots``) and ``observer`` is
    called with the live state. The trajectory depends only on ``rng`` and
    not on the cadence.

    Args:
        g0: initial graph (not modified)
        kind: standard, block or global
        params: lamp probabilities
        steps: step budget
        checkpoint_every: cadence s_n
        observer: optional checkpoint callback
        rng: random stream; the walk uses streams derived from it
        partition: communities (block walk)
        keep_snapshots: keep copies of every checkpoint state
        position: start vertex (uniform when None)

    Returns:
        Snapshots at the checkpoints, or only the final live state when
        keep_snapshots is False
    """
    if steps < 0:
        raise InvalidParameterError(f"steps must be >= 0, got {steps}")
    if checkpoint_every < 1:
        raise InvalidParameterError(f"checkpoint_every must be >= 1, got {checkpoint_every}")

    walk = WalkFactory.create_walk(kind, g0.n, params, partition)
    state = walk.initial_state(g0, rng.derive("walk", "start"), position)
    step_rng = rng.derive("walk", "steps")
    snapshots: List[WalkState] = []

    def checkpoint() -> bool:
        if keep_snapshots:
            snapshots.append(state.snapshot())
        if observer is None:
            return False
        return bool(observer(state))

    stopped = checkpoint()
    while not stopped and state.step < steps:
        to_next = checkpoint_every - state.step % checkpoint_every
        walk.advance(state, min(to_next, steps - state.step), step_rng)
        if state.step % checkpoint_every == 0:
            stopped = checkpoint()

    if stopped:
        logger.debug(f"Observer stopped the walk at step {state.step}")
    if not keep_snapshots:
        snapshots.append(state)
    return snapshots
