"""
SNAP-style edge list and label file readers and writers
"""
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import DataError
from ..graph_core import Graph, Partition

logger = logging.getLogger(__name__)

_NODES_HEADER = re.compile(r"#\s*Nodes:\s*(\d+)")


@dataclass(frozen=True)
class EdgeListFile:
    """
    Whitespace-separated "u v" lines, '#' comments

    Vertex ids are non-negative integers (at least 1 when ``one_indexed``).
    The ids present in the file fix n; a SNAP "# Nodes:" header only adds
    isolated vertices inside its own id range.
    """
    path: str
    directed: bool = False
    one_indexed: bool = False

    @property
    def base(self) -> int:
        return 1 if self.one_indexed else 0


@dataclass(frozen=True)
class LabelFile:
    """"vertex_id label" lines, '#' comments"""
    path: str


def _read_lines(path: str) -> List[str]:
    try:
        return Path(path).read_text().splitlines()
    except OSError as e:
        raise DataError(f"Cannot read {path}: {e}") from e


def _parse_pairs(path: str) -> Tuple[List[Tuple[int, int]], Optional[int]]:
    """Integer pairs of a whitespace file plus the declared node count, if any"""
    pairs = []
    declared = None
    for number, raw in enumerate(_read_lines(path), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('#'):
            header = _NODES_HEADER.match(line)
            if header:
                declared = int(header.group(1))
            continue
        fields = line.split()
        if len(fields) < 2:
            raise DataError(f"{path}:{number}: expected two ids, got {line!r}")
        try:
            pairs.append((int(fields[0]), int(fields[1])))
        except ValueError:
            raise DataError(f"{path}:{number}: ids must be integers, got {line!r}") from None
    return pairs, declared


def _dense_ids(raw: np.ndarray, declared: Optional[int], file: EdgeListFile) -> Tuple[np.ndarray, np.ndarray]:
    """
    Original vertex ids and the dense index of every raw id

    Ids present in the file are sorted and numbered 0..n-1. A "# Nodes: N"
    header keeps isolated vertices only when every id already lies in
    [base, base + N); otherwise it is ignored.
    """
    present = np.unique(raw)
    if declared is not None:
        if present.size == 0 or (present[0] >= file.base and present[-1] < file.base + declared):
            return np.arange(declared, dtype=np.int64) + file.base, raw - file.base
        logger.warning(
            f"{file.path}: ignoring '# Nodes: {declared}' header, ids reach {int(present[-1])}"
        )
    return present, np.searchsorted(present, raw)


def parse_edge_list(file: EdgeListFile) -> Graph:
    """
    Read a simple undirected graph

    Duplicate edges collapse, self-loops are dropped and directed inputs are
    symmetrized. Vertices are the ids present in the file, relabeled densely
    in ascending id order.

    Args:
        file: edge list description

    Returns:
        Graph whose vertex_ids are the original ids
    """
    pairs, declared = _parse_pairs(file.path)
    if not pairs and not declared:
        raise DataError(f"{file.path}: no edges")

    raw = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    if len(raw) and raw.min() < file.base:
        raise DataError(f"{file.path}: vertex id below {file.base}")
    vertex_ids, ids = _dense_ids(raw, declared, file)
    n = len(vertex_ids)

    loops = int(np.count_nonzero(ids[:, 0] == ids[:, 1]))
    graph = Graph.from_edge_list(n, ids)
    graph.vertex_ids = vertex_ids

    collapsed = len(ids) - loops - graph.edge_count
    if loops:
        logger.info(f"Dropped {loops} self-loops from {file.path}")
    if collapsed:
        kind = "directed/duplicate" if file.directed else "duplicate"
        logger.info(f"Collapsed {collapsed} {kind} edges from {file.path}")
    logger.info(f"Loaded {file.path}: n={graph.n}, {graph.edge_count} edges")
    return graph


def write_edge_list(graph: Graph, path: str, one_indexed: bool = False, original_ids: bool = False) -> None:
    """
    Write one "u v" line per edge (u < v) under a SNAP-style header

    Args:
        graph: graph to write
        path: output file
        one_indexed: shift dense ids by one
        original_ids: write vertex_ids instead of dense ids (no node header)
    """
    pairs = graph.edge_pairs()
    if original_ids:
        pairs = graph.vertex_ids[pairs]
    else:
        pairs = pairs + (1 if one_indexed else 0)
    lines = ["# Undirected graph"]
    if not original_ids:
        lines.append(f"# Nodes: {graph.n} Edges: {graph.edge_count}")
    lines.extend(f"{u} {v}" for u, v in pairs.tolist())
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + "\n")
    logger.debug(f"Wrote {graph.edge_count} edges to {path}")


def read_labels(file: LabelFile) -> Dict[int, int]:
    """Map original vertex id to raw label; conflicting duplicates raise DataError"""
    pairs, _ = _parse_pairs(file.path)
    labels: Dict[int, int] = {}
    for vertex, label in pairs:
        if labels.setdefault(vertex, label) != label:
            raise DataError(f"{file.path}: vertex {vertex} has labels {labels[vertex]} and {label}")
    if not labels:
        raise DataError(f"{file.path}: no labels")
    return labels


def parse_label_file(file: LabelFile, graph: Graph) -> Partition:
    """
    Community partition of the graph's vertices

    Labels are matched through ``graph.vertex_ids`` and renumbered densely in
    ascending order of the raw labels present. Labels of vertices outside the
    graph are ignored.

    Raises:
        DataError: a vertex of the graph has no label
    """
    labels = read_labels(file)
    missing = [int(v) for v in graph.vertex_ids if int(v) not in labels]
    if missing:
        raise DataError(f"{file.path}: {len(missing)} vertices without a label (first: {missing[:5]})")
    raw = np.array([labels[int(v)] for v in graph.vertex_ids])
    _, dense = np.unique(raw, return_inverse=True)
    partition = Partition(dense)
    logger.info(f"Loaded {file.path}: {partition.k} communities over {partition.n} vertices")
    return partition
