"""
Factory for creating edgelighter walks
"""
import logging
from typing import Optional, Union

from ..config import WalkKind
from ..errors import DataError, InvalidParameterError
from ..graph_core import Partition
from .base import BaseWalk, BlockWalkParams, StandardWalkParams
from .block import BlockWalk
from .global_walk import GlobalWalk
from .standard import StandardWalk

logger = logging.getLogger(__name__)

WalkParams = Union[StandardWalkParams, BlockWalkParams]


class WalkFactory:
    """Factory for creating walks by kind"""

    @staticmethod
    def create_walk(
        kind: Union[WalkKind, str],
        n: int,
        params: WalkParams,
        partition: Optional[Partition] = None
    ) -> BaseWalk:
        """
        Create a walk of the requested kind

        Args:
            kind: standard, block or global
            n: vertex count
            params: lamp probabilities; a StandardWalkParams given for a block
                walk is applied to every community
            partition: communities (required for the block walk)

        Returns:
            Walk instance
        """
        kind = WalkKind(kind)

        if kind == WalkKind.BLOCK:
            if partition is None:
                raise DataError("The block walk needs a community partition")
            if partition.n != n:
                raise InvalidParameterError(f"Partition covers {partition.n} vertices, graph has {n}")
            if isinstance(params, StandardWalkParams):
                params = BlockWalkParams.uniform(partition.k, params.q1, params.q2)
            logger.debug(f"Creating block walk with K={partition.k}")
            return BlockWalk(partition, params)

        if not isinstance(params, StandardWalkParams):
            raise InvalidParameterError(f"{kind.value} walk needs StandardWalkParams")

        if kind == WalkKind.STANDARD:
            return StandardWalk(n, params)

        elif kind == WalkKind.GLOBAL:
            return GlobalWalk(n, params)

        else:
            raise InvalidParameterError(f"Unknown walk kind: {kind}")
