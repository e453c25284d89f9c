"""
Network preprocessing: induced subgraphs, largest component, dataset loading
"""
import logging
from typing import Iterable, Optional, Tuple

import networkx as nx
import numpy as np

from ..config import ExperimentConfig, WalkKind
from ..errors import DataError
from ..graph_core import Graph, Partition, pair_index
from .edge_list import EdgeListFile, LabelFile, parse_edge_list, parse_label_file

logger = logging.getLogger(__name__)


def induced_subgraph(
    g: Graph,
    vertices: Optional[Iterable[int]] = None,
    id_range: Optional[Tuple[int, int]] = None
) -> Graph:
    """
    Subgraph induced by a set or inclusive range of original vertex ids

    Args:
        g: source graph
        vertices: original ids to keep
        id_range: inclusive (low, high) range of original ids to keep

    Returns:
        Dense graph on the selection (in original order) with vertex_ids kept
    """
    if (vertices is None) == (id_range is None):
        raise DataError("Give exactly one of vertices or id_range")
    if id_range is not None:
        low, high = id_range
        mask = (g.vertex_ids >= low) & (g.vertex_ids <= high)
    else:
        mask = np.isin(g.vertex_ids, np.fromiter(vertices, dtype=np.int64))
    kept = np.flatnonzero(mask)
    if len(kept) == 0:
        raise DataError("Induced subgraph selection is empty")

    position = np.full(g.n, -1, dtype=np.int64)
    position[kept] = np.arange(len(kept))
    pairs = position[g.edge_pairs()]
    pairs = pairs[(pairs >= 0).all(axis=1)]

    sub = Graph(len(kept), vertex_ids=g.vertex_ids[kept])
    if len(pairs):
        sub.edges[pair_index(pairs[:, 0], pairs[:, 1], sub.n)] = True
        sub.recount()
    logger.debug(f"Induced subgraph: {sub.n} of {g.n} vertices, {sub.edge_count} edges")
    return sub


def to_networkx(g: Graph) -> nx.Graph:
    """networkx view on dense vertex indices"""
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from(g.edge_pairs().tolist())
    return graph


def largest_connected_component(g: Graph) -> Graph:
    """
    Induced subgraph on the largest connected component

    Ties are broken by the smallest minimum original vertex id.
    """
    components = [np.fromiter(c, dtype=np.int64) for c in nx.connected_components(to_networkx(g))]
    best = min(components, key=lambda c: (-len(c), int(g.vertex_ids[c].min())))
    logger.info(f"Largest component: {len(best)} of {g.n} vertices ({len(components)} components)")
    if len(best) == g.n:
        return g.copy()
    return induced_subgraph(g, vertices=g.vertex_ids[best].tolist())


def load_network(config: ExperimentConfig) -> Tuple[Graph, Optional[Partition]]:
    """
    Load the network of a loaded-graph experiment

    Applies, in order: edge list parsing, the original-id range, the largest
    component, and the label file (required for the block walk).
    """
    if not config.edge_list:
        raise DataError("Loaded-graph experiments need an edge_list path")
    graph = parse_edge_list(EdgeListFile(config.edge_list, one_indexed=config.one_indexed))
    if config.vertex_range is not None:
        graph = induced_subgraph(graph, id_range=tuple(config.vertex_range))
    if config.largest_component:
        graph = largest_connected_component(graph)

    partition = None
    if config.label_file:
        partition = parse_label_file(LabelFile(config.label_file), graph)
    elif config.walk_kind == WalkKind.BLOCK:
        raise DataError("The block walk on a loaded graph needs a label_file")
    return graph, partition
