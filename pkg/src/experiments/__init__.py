"""
Anonymization experiments: sweeps, detection, fits and exact small-graph checks
"""
from .anonymization import (
    AnonymizationEstimate,
    TraceRecord,
    detect_anonymization,
    detect_community_anonymization,
    shuffle_threshold,
)
from .orchestrator import (
    ExperimentOrchestrator,
    ReplicateResult,
    SweepResults,
    run_er_sweep,
    run_loaded_graph,
    run_sbm_sweep,
)
from .regression import LogLogFit, loglog_fit
from .theory_checks import (
    MatchabilityReport,
    PostCoverReport,
    anonymization_tail_bound,
    matchability_check,
    post_cover_check,
)

__all__ = [
    'AnonymizationEstimate',
    'TraceRecord',
    'detect_anonymization',
    'detect_community_anonymization',
    'shuffle_threshold',
    'ExperimentOrchestrator',
    'ReplicateResult',
    'SweepResults',
    'run_er_sweep',
    'run_loaded_graph',
    'run_sbm_sweep',
    'LogLogFit',
    'loglog_fit',
    'MatchabilityReport',
    'PostCoverReport',
    'anonymization_tail_bound',
    'matchability_check',
    'post_cover_check',
]
