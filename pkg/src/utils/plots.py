"""
Trace CSV files, SVG figures and run manifests

Payload files are deterministic given their inputs: CSV floats are written
with round-trip precision and SVGs use a fixed hash salt and no date.
"""
import json
import logging
import platform
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import matplotlib
import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from ..config import ExperimentConfig
from ..errors import DimensionMismatchError, InvalidParameterError
from ..experiments import LogLogFit, TraceRecord
from ..graph_core import Graph, Partition

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
SVG_SALT = 'edgelighter'
MANIFEST_PACKAGES = ('numpy', 'scipy', 'pandas', 'networkx', 'matplotlib', 'tqdm', 'python-dotenv')


def trace_frame(trace: Sequence[TraceRecord]) -> pd.DataFrame:
    """Columns step, correctness, cover_rate[, community_1..K][, cover_community_1..K], objective, shuffled"""
    if not trace:
        raise InvalidParameterError("Trace is empty")
    return pd.DataFrame([record.to_dict() for record in trace])


def write_trace_csv(trace: Sequence[TraceRecord], path: str) -> None:
    frame = trace_frame(trace)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"Wrote {len(frame)} checkpoints to {path}")


def _numbered(frame: pd.DataFrame, prefix: str) -> List[str]:
    """Columns ``prefix1..prefixK`` in community order"""
    return sorted(
        (c for c in frame.columns if c.startswith(prefix) and c[len(prefix):].isdigit()),
        key=lambda c: int(c[len(prefix):])
    )


def read_trace_csv(path: str) -> List[TraceRecord]:
    """Inverse of write_trace_csv"""
    frame = pd.read_csv(path)
    communities = _numbered(frame, 'community_')
    covers = _numbered(frame, 'cover_community_')
    trace = []
    for row in frame.itertuples(index=False):
        values = row._asdict()
        per_community = tuple(float(values[c]) for c in communities) if communities else None
        community_cover = tuple(float(values[c]) for c in covers) if covers else None
        trace.append(TraceRecord(
            step=int(values['step']),
            correctness=float(values['correctness']),
            cover_rate=float(values['cover_rate']),
            per_community=per_community,
            objective=int(values['objective']),
            shuffled=int(values['shuffled']),
            community_cover=community_cover
        ))
    return trace


def _save(figure: Figure, path: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({'svg.hashsalt': SVG_SALT}):
        figure.savefig(path, format='svg', metadata={'Date': None})


def write_svg_plot(trace: Sequence[TraceRecord], path: str, title: Optional[str] = None) -> None:
    """
    Matching correctness and cover rate against walk steps

    Correctness is on the left axis, cover rate on the right. Per-community
    correctness, when present, is drawn as thin dashed lines and
    per-community cover rates as thin dotted lines.
    """
    frame = trace_frame(trace)
    figure = Figure(figsize=(7, 4))
    ax = figure.add_subplot(1, 1, 1)
    ax.plot(frame['step'], frame['correctness'], color='tab:blue', label='matching correctness')
    for column in _numbered(frame, 'community_'):
        ax.plot(frame['step'], frame[column], linestyle='--', linewidth=0.8, label=column.replace('_', ' '))
    ax.set_xlabel('number of steps')
    ax.set_ylabel('matching correctness')
    ax.set_ylim(-0.02, 1.02)

    cover = ax.twinx()
    cover.plot(frame['step'], frame['cover_rate'], color='tab:red', label='cover rate')
    for column in _numbered(frame, 'cover_community_'):
        label = f"cover community {column.rsplit('_', 1)[1]}"
        cover.plot(frame['step'], frame[column], linestyle=':', linewidth=0.8, label=label)
    cover.set_ylabel('cover rate')
    cover.set_ylim(-0.02, 1.02)

    handles, labels = ax.get_legend_handles_labels()
    extra_handles, extra_labels = cover.get_legend_handles_labels()
    ax.legend(handles + extra_handles, labels + extra_labels, loc='center right', fontsize='small')
    if title:
        ax.set_title(title)
    figure.tight_layout()
    _save(figure, path)
    logger.debug(f"Wrote trace plot to {path}")


def community_order(graph: Graph, partition: Optional[Partition] = None) -> np.ndarray:
    """Vertices sorted by community, ties kept in vertex order"""
    if partition is None:
        return np.arange(graph.n)
    if partition.n != graph.n:
        raise DimensionMismatchError("Partition and graph differ in size")
    return np.argsort(partition.labels, kind='stable')


def write_adjacency_svg(
    graph: Graph,
    path: str,
    partition: Optional[Partition] = None,
    title: Optional[str] = None
) -> None:
    """
    Adjacency matrix image, rows and columns grouped by community

    Edges are black on white; community boundaries are drawn as thin lines.
    """
    order = community_order(graph, partition)
    adjacency = graph.adjacency()[np.ix_(order, order)]
    figure = Figure(figsize=(5, 5))
    ax = figure.add_subplot(1, 1, 1)
    ax.imshow(adjacency, cmap='Greys', vmin=0, vmax=1, interpolation='nearest')
    if partition is not None:
        for edge in np.cumsum(partition.sizes)[:-1]:
            ax.axhline(edge - 0.5, color='tab:red', linewidth=0.5)
            ax.axvline(edge - 0.5, color='tab:red', linewidth=0.5)
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title)
    figure.tight_layout()
    _save(figure, path)
    logger.debug(f"Wrote {graph.n}x{graph.n} adjacency plot to {path}")


def write_loglog_svg(
    points: Sequence[Tuple[float, float]],
    fit: Optional[LogLogFit],
    path: str,
    label: str = 'anonymization time'
) -> None:
    """Anonymization time against n on log-log axes with the fitted line"""
    data = np.asarray(points, dtype=float)
    if data.ndim != 2 or len(data) == 0:
        raise InvalidParameterError("No points to plot")
    figure = Figure(figsize=(6, 4))
    ax = figure.add_subplot(1, 1, 1)
    ax.loglog(data[:, 0], data[:, 1], 'o', label=label)
    if fit is not None:
        grid = np.linspace(data[:, 0].min(), data[:, 0].max(), 200)
        ax.loglog(grid, [fit.predict(n) for n in grid], '--', label=f'fit, slope {fit.slope:.3f}')
    ax.set_xlabel('n')
    ax.set_ylabel(label)
    ax.grid(True, which='both', alpha=0.3)
    ax.legend()
    figure.tight_layout()
    _save(figure, path)
    logger.debug(f"Wrote log-log plot to {path}")


def _version(package: str) -> Optional[str]:
    try:
        return metadata.version(package)
    except metadata.PackageNotFoundError:
        return None


def write_manifest(out_dir: str, config: ExperimentConfig, extra: Optional[dict] = None) -> Path:
    """Run metadata (timestamp, versions, config) in manifest.json"""
    manifest = {
        'created': datetime.now(timezone.utc).isoformat(),
        'python': platform.python_version(),
        'packages': {name: _version(name) for name in MANIFEST_PACKAGES},
        'config': config.to_dict(),
    }
    if extra:
        manifest.update(extra)
    path = Path(out_dir) / 'manifest.json'
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, default=str))
    logger.info(f"Wrote manifest to {path}")
    return path
