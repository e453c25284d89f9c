"""
Shared fixtures and the --runslow switch
"""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.graph_core import Graph, Partition, RngStream  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow acceptance checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo or sweep checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return RngStream(20240607)


@pytest.fixture
def triangle():
    return Graph.from_edge_list(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def two_blocks():
    """Communities {0, 1, 2, 3} and {4, 5, 6, 7} with three cross edges"""
    edges = [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7), (0, 4), (1, 6), (3, 7)]
    return Graph.from_edge_list(8, edges), Partition.from_sizes([4, 4])


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ('EDGELIGHTER_SEED', 'EDGELIGHTER_THREADS', 'EDGELIGHTER_OUT_DIR'):
        monkeypatch.delenv(name, raising=False)
