"""
Total variation distance and exact mixing times of enumerated chains
"""
import concurrent.futures
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import sparse

from ..errors import DimensionMismatchError, InvalidParameterError, MixingNotReachedError
from ..graph_core import num_pairs, pair_endpoints
from .model import ChainModel, config_bits

logger = logging.getLogger(__name__)


@dataclass
class MixingReport:
    """Worst-start TV curve and the first step below epsilon"""
    t_mix: int
    tv_curve: List[Tuple[int, float]]
    epsilon: float
    projected: bool = False
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            't_mix': self.t_mix,
            'epsilon': self.epsilon,
            'projected': self.projected,
            'final_tv': self.tv_curve[-1][1] if self.tv_curve else None,
        }


def tv_distance(mu: np.ndarray, nu: np.ndarray) -> float:
    """(1/2) sum |mu_i - nu_i|"""
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if mu.shape != nu.shape:
        raise DimensionMismatchError(f"Distributions of shapes {mu.shape} and {nu.shape}")
    return float(0.5 * np.abs(mu - nu).sum())


def _worst_tv(dist: np.ndarray, target: np.ndarray, lumping: Optional[sparse.csr_matrix]) -> float:
    if lumping is not None:
        dist = np.asarray(lumping.T @ dist.T).T
    return float(0.5 * np.abs(dist - target[None, :]).sum(axis=1).max())


def _block_curve(
    transposed: sparse.csr_matrix,
    pi: np.ndarray,
    starts: np.ndarray,
    epsilon: float,
    max_steps: int,
    lumping: Optional[sparse.csr_matrix],
    horizon: int = -1
) -> List[float]:
    """
    Worst TV over a block of start states, from t = 0 until it drops below
    epsilon (and at least through ``horizon``)
    """
    size = len(pi)
    target = pi if lumping is None else np.asarray(lumping.T @ pi).ravel()
    dist = np.zeros((len(starts), size))
    dist[np.arange(len(starts)), starts] = 1.0
    curve = [_worst_tv(dist, target, lumping)]
    t = 0
    while curve[-1] >= epsilon or t < horizon:
        if t >= max_steps:
            raise MixingNotReachedError(
                f"Worst-start TV still {curve[-1]:.4g} >= {epsilon} after {max_steps} steps"
            )
        dist = np.asarray(transposed @ dist.T).T
        t += 1
        curve.append(_worst_tv(dist, target, lumping))
    return curve


def _mixing(
    model: ChainModel,
    epsilon: float,
    max_steps: int,
    block_size: int,
    threads: int,
    lumping: Optional[sparse.csr_matrix]
) -> MixingReport:
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must be in (0, 1), got {epsilon}")
    pi = model.stationary
    if not np.all(np.isfinite(pi)):
        raise InvalidParameterError("Model has no stationary law (degenerate parameters)")

    transposed = model.transition.T.tocsr()
    blocks = [np.arange(s, min(s + block_size, model.num_states))
              for s in range(0, model.num_states, block_size)]

    def run(starts: np.ndarray, horizon: int = -1) -> List[float]:
        return _block_curve(transposed, pi, starts, epsilon, max_steps, lumping, horizon)

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
        curves = list(executor.map(run, blocks))

    # t_mix is no earlier than the largest block crossing. Projected curves
    # can rise again after a crossing, so the merged curve is scanned forward
    # over doubling horizons until it is below epsilon.
    t_mix = max(len(curve) - 1 for curve in curves)
    horizon = t_mix
    while True:
        short = [b for b, curve in enumerate(curves) if len(curve) - 1 < horizon]
        if short:
            with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
                extended = list(executor.map(lambda b: run(blocks[b], horizon), short))
            for b, curve in zip(short, extended):
                curves[b] = curve
        worst = np.max(np.array([curve[:horizon + 1] for curve in curves]), axis=0)
        crossed = np.flatnonzero(worst[t_mix:] < epsilon)
        if crossed.size:
            t_mix += int(crossed[0])
            break
        if horizon >= max_steps:
            raise MixingNotReachedError(
                f"Worst-start TV still {worst[-1]:.4g} >= {epsilon} after {max_steps} steps"
            )
        t_mix = horizon + 1
        horizon = min(max_steps, 2 * horizon + 1)

    return MixingReport(
        t_mix=t_mix,
        tv_curve=[(t, float(value)) for t, value in enumerate(worst[:t_mix + 1])],
        epsilon=epsilon,
        projected=lumping is not None
    )


def exact_mixing_time(
    model: ChainModel,
    epsilon: float = 0.25,
    max_steps: int = 100_000,
    block_size: int = 512,
    threads: int = 1
) -> MixingReport:
    """
    First t with max over start states of ||P^t(x, .) - pi||_TV < epsilon

    Distributions of a block of start states are evolved by repeated sparse
    products; no matrix powers are formed.

    Args:
        model: enumerated chain (its closed-form stationary law is used)
        epsilon: TV threshold
        max_steps: step cap
        block_size: start states evolved together
        threads: worker threads over start blocks

    Returns:
        MixingReport with the worst-start TV curve from t = 0 to t_mix

    Raises:
        MixingNotReachedError: if the cap is reached (reducible or periodic chain)
    """
    report = _mixing(model, epsilon, max_steps, block_size, threads, None)
    logger.info(f"Exact mixing time ({model.kind}, n={model.n}, eps={epsilon}): {report.t_mix}")
    return report


def lumping_matrix(labels: np.ndarray) -> sparse.csr_matrix:
    """0/1 matrix sending each state to its class (classes densely renumbered)"""
    _, classes = np.unique(np.asarray(labels), return_inverse=True)
    size = len(classes)
    return sparse.csr_matrix(
        (np.ones(size), (np.arange(size), classes)),
        shape=(size, int(classes.max()) + 1)
    )


def marginal_mixing_time(
    model: ChainModel,
    projection: np.ndarray,
    epsilon: float = 0.25,
    max_steps: int = 100_000,
    block_size: int = 512,
    threads: int = 1
) -> MixingReport:
    """
    Mixing time of the push-forward of the chain through a state labelling

    Args:
        model: enumerated chain
        projection: one label per state; distributions are compared after
            summing probability within each label class
        epsilon: TV threshold

    Returns:
        MixingReport for the projected distributions (worst start state)
    """
    projection = np.asarray(projection)
    if projection.shape != (model.num_states,):
        raise DimensionMismatchError("Projection must label every state")
    return _mixing(model, epsilon, max_steps, block_size, threads, lumping_matrix(projection))


def community_projection(model: ChainModel, community: int) -> np.ndarray:
    """
    Label of each state by the lamps inside one community

    Returns:
        Integer per state encoding the configuration induced on the community
    """
    if model.kind != "block":
        raise InvalidParameterError("Community projections need a block chain")
    partition = model.meta['partition']
    rows, cols = pair_endpoints(model.n)
    inside = np.flatnonzero((partition.labels[rows] == community) & (partition.labels[cols] == community))
    bits = config_bits(model.configs, num_pairs(model.n))[:, inside]
    weights = 1 << np.arange(len(inside) - 1, -1, -1, dtype=np.int64)
    return bits @ weights if len(inside) else np.zeros(model.num_states, dtype=np.int64)
