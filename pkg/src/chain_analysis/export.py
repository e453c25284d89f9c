"""
CSV dumps of enumerated chains and TV curves
"""
import logging
from pathlib import Path
from typing import Union

import pandas as pd

from .mixing import MixingReport
from .model import ChainModel

logger = logging.getLogger(__name__)


def chain_states_frame(model: ChainModel) -> pd.DataFrame:
    """One row per state: index, community, position, config, stationary"""
    frame = pd.DataFrame({
        'state': range(model.num_states),
        'position': model.positions,
        'config': model.configs,
        'stationary': model.stationary,
    })
    if model.communities is not None:
        frame.insert(1, 'community', model.communities)
    return frame


def dump_chain_csv(model: ChainModel, path: Union[str, Path]) -> Path:
    """
    Write the nonzero transitions as from,to,probability rows

    A sibling file ``<stem>_states.csv`` lists the states.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    coo = model.transition.tocoo()
    transitions = pd.DataFrame({'from': coo.row, 'to': coo.col, 'probability': coo.data})
    transitions = transitions.sort_values(['from', 'to'], kind='mergesort')
    transitions.to_csv(path, index=False, float_format='%.17g')
    chain_states_frame(model).to_csv(
        path.with_name(f"{path.stem}_states.csv"), index=False, float_format='%.17g'
    )
    logger.info(f"Wrote {len(transitions)} transitions to {path}")
    return path


def dump_tv_curve_csv(report: MixingReport, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(report.tv_curve, columns=['t', 'tv'])
    frame.to_csv(path, index=False, float_format='%.17g')
    return path
