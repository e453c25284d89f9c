"""
Community partitions and stochastic block model parameters
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from ..errors import DimensionMismatchError, InvalidParameterError


@dataclass(frozen=True)
class Partition:
    """
    Assignment of n vertices to K communities labeled 0..K-1

    Attributes:
        labels: community id of each vertex
    """
    labels: np.ndarray
    sizes: np.ndarray = field(init=False)

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or len(labels) == 0:
            raise InvalidParameterError("Partition needs a nonempty label vector")
        if labels.min() < 0:
            raise InvalidParameterError("Community labels must be nonnegative")
        sizes = np.bincount(labels)
        if (sizes == 0).any():
            raise InvalidParameterError("Community labels must be dense (no empty community)")
        labels.setflags(write=False)
        sizes.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "Partition":
        """Contiguous blocks: the first sizes[0] vertices form community 0, etc."""
        sizes = [int(s) for s in sizes]
        if any(s <= 0 for s in sizes):
            raise InvalidParameterError(f"Community sizes must be positive, got {sizes}")
        return cls(np.repeat(np.arange(len(sizes)), sizes))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return len(self.sizes)

    def members(self, community: int) -> np.ndarray:
        return np.flatnonzero(self.labels == community)

    def all_members(self) -> List[np.ndarray]:
        return [self.members(c) for c in range(self.k)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())


@dataclass(frozen=True)
class SbmParams:
    """
    Stochastic block model parameters

    Attributes:
        sizes: community sizes n_1..n_K (contiguous blocks in vertex order)
        lam: symmetric K x K matrix of edge probabilities
    """
    sizes: tuple
    lam: np.ndarray

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        lam = np.array(self.lam, dtype=float)
        if not sizes or any(s <= 0 for s in sizes):
            raise InvalidParameterError(f"Community sizes must be positive, got {sizes}")
        if lam.shape != (len(sizes), len(sizes)):
            raise DimensionMismatchError(
                f"Lambda of shape {lam.shape} does not match {len(sizes)} communities"
            )
        if not np.allclose(lam, lam.T, atol=0.0):
            raise InvalidParameterError("Lambda must be symmetric")
        if (lam < 0).any() or (lam > 1).any():
            raise InvalidParameterError("Lambda entries must lie in [0, 1]")
        lam.setflags(write=False)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    def partition(self) -> Partition:
        return Partition.from_sizes(self.sizes)


# Community counts for the skewed-layout SBM runs
SKEWED_COMMUNITY_COUNTS: Dict[int, int] = {81: 5, 256: 7, 625: 9}


def skewed_block_sizes(n: int, k: int) -> List[int]:
    """
    Block sizes (n^{1/4}, n^{2/3} x (K-2), remainder)

    The smallest block is floor(n^{1/4}), the K-2 middle blocks are
    floor(n^{2/3}) each and the largest block absorbs the remainder so the
    sizes sum to n.
    """
    if k < 2:
        raise InvalidParameterError("Skewed SBM layout needs at least two communities")
    smallest = int(math.floor(n ** 0.25 + 1e-9))
    middle = int(math.floor(n ** (2.0 / 3.0) + 1e-9))
    largest = n - smallest - middle * (k - 2)
    if largest <= 0:
        raise InvalidParameterError(f"n={n} is too small for K={k} skewed blocks")
    return [smallest] + [middle] * (k - 2) + [largest]


def skewed_sbm_params(n: int, k: int = None) -> SbmParams:
    """
    SBM preset for the block-walk sweep

    Lambda = (log n / n^{3/4}) J + diag(1/2); K defaults to the preset count
    for n in {81, 256, 625}.
    """
    if k is None:
        if n not in SKEWED_COMMUNITY_COUNTS:
            raise InvalidParameterError(
                f"No default community count for n={n}; pass k explicitly"
            )
        k = SKEWED_COMMUNITY_COUNTS[n]
    sizes = skewed_block_sizes(n, k)
    lam = np.full((k, k), math.log(n) / n ** 0.75) + np.diag(np.full(k, 0.5))
    return SbmParams(tuple(sizes), np.clip(lam, 0.0, 1.0))
