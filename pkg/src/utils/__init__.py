"""
Environment loading, output files and sweep reports
"""
from .env_loader import environment_settings, load_environment, validate_environment
from .plots import (
    community_order,
    read_trace_csv,
    trace_frame,
    write_adjacency_svg,
    write_loglog_svg,
    write_manifest,
    write_svg_plot,
    write_trace_csv,
)
from .report import (
    community_order_rate,
    fits_frame,
    print_sweep_report,
    summarize_sweep,
    write_sweep_outputs,
)

__all__ = [
    'environment_settings',
    'load_environment',
    'validate_environment',
    'community_order',
    'read_trace_csv',
    'write_adjacency_svg',
    'trace_frame',
    'write_loglog_svg',
    'write_manifest',
    'write_svg_plot',
    'write_trace_csv',
    'community_order_rate',
    'fits_frame',
    'print_sweep_report',
    'summarize_sweep',
    'write_sweep_outputs',
]
