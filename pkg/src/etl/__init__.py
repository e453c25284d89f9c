"""
Network ingestion: edge lists, label files and preprocessing
"""
from .edge_list import (
    EdgeListFile,
    LabelFile,
    parse_edge_list,
    parse_label_file,
    read_labels,
    write_edge_list,
)
from .network import induced_subgraph, largest_connected_component, load_network, to_networkx

__all__ = [
    'EdgeListFile',
    'LabelFile',
    'parse_edge_list',
    'parse_label_file',
    'read_labels',
    'write_edge_list',
    'induced_subgraph',
    'largest_connected_component',
    'load_network',
    'to_networkx',
]
