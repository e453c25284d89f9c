"""
Orchestrator for anonymization sweeps

A replicate samples (or receives) an initial graph, runs an edgelighter walk
and, at every checkpoint, matches the noisy graph back to the initial one with
the seeded solver. Replicates run in a thread pool and fail independently.
"""
import logging
import concurrent.futures
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..config import ExperimentConfig, GraphModel, WalkKind
from ..edgelighter import (
    StandardWalkParams,
    WalkState,
    community_cover_rates,
    community_pair_labels,
    run_walk,
)
from ..errors import DataError
from ..graph_core import Graph, Partition, RngStream, skewed_sbm_params, sample_er, sample_sbm
from ..matching import MatcherFactory, SeedSet, sample_seeds
from .anonymization import (
    AnonymizationEstimate,
    TraceRecord,
    detect_anonymization,
    detect_community_anonymization,
)
from .regression import LogLogFit, loglog_fit

logger = logging.getLogger(__name__)


def _beta_key(beta: float) -> str:
    return f"{beta:g}"


@dataclass
class ReplicateResult:
    """Trace and anonymization estimates of one (n, replicate) run"""
    experiment: str
    n: int
    replicate: int
    success: bool
    trace: List[TraceRecord] = field(default_factory=list, repr=False)
    estimates: List[AnonymizationEstimate] = field(default_factory=list)
    community_estimates: List[AnonymizationEstimate] = field(default_factory=list)
    community_sizes: Optional[Tuple[int, ...]] = None
    seeds: int = 0
    steps_run: int = 0
    cover_step: Optional[int] = None
    error: Optional[str] = None

    def t_hat(self, beta: float, community: Optional[int] = None) -> Optional[int]:
        """Estimated anonymization time, globally or for a 0-based community"""
        pool = self.estimates if community is None else self.community_estimates
        for estimate in pool:
            if estimate.beta == beta and estimate.community == community:
                return estimate.t_hat
        return None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to flat dictionary for DataFrame"""
        result = {
            'experiment': self.experiment,
            'n': self.n,
            'replicate': self.replicate,
            'success': self.success,
            'seeds': self.seeds,
            'steps_run': self.steps_run,
            'checkpoints': len(self.trace),
            'cover_step': self.cover_step,
            'final_cover_rate': self.trace[-1].cover_rate if self.trace else None,
            'error': self.error
        }
        for estimate in self.estimates:
            result[f't_hat_{_beta_key(estimate.beta)}'] = estimate.t_hat
        for estimate in self.community_estimates:
            result[f'{estimate.scope}_t_hat_{_beta_key(estimate.beta)}'] = estimate.t_hat
        return result


@dataclass
class SweepResults:
    """All replicates of a sweep plus per-n aggregation"""
    experiment: str
    config: ExperimentConfig
    replicates: List[ReplicateResult]

    @property
    def successful(self) -> List[ReplicateResult]:
        return [r for r in self.replicates if r.success]

    @property
    def failed(self) -> List[ReplicateResult]:
        return [r for r in self.replicates if not r.success]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_dict() for r in self.replicates])

    def estimates_frame(self) -> pd.DataFrame:
        """One row per (n, replicate, beta, scope)"""
        rows = []
        for result in self.successful:
            for estimate in result.estimates + result.community_estimates:
                rows.append({
                    'n': result.n,
                    'replicate': result.replicate,
                    'beta': estimate.beta,
                    'scope': estimate.scope,
                    't_hat': np.nan if estimate.t_hat is None else float(estimate.t_hat),
                })
        return pd.DataFrame(rows, columns=['n', 'replicate', 'beta', 'scope', 't_hat'])

    def median_t_hat(self, beta: float, scope: str = "global") -> Dict[int, float]:
        """Median anonymization time per n over replicates where it was detected"""
        frame = self.estimates_frame()
        frame = frame[(frame['beta'] == beta) & (frame['scope'] == scope)]
        medians = frame.groupby('n')['t_hat'].median()
        return {int(n): float(value) for n, value in medians.items()}

    def fit(self, beta: float, scope: str = "global") -> Optional[LogLogFit]:
        """Log-log fit of the median anonymization times, None with < 2 usable n"""
        points = [(n, t) for n, t in sorted(self.median_t_hat(beta, scope).items()) if np.isfinite(t) and t > 0]
        if len({n for n, _ in points}) < 2:
            return None
        return loglog_fit(points)


class ExperimentOrchestrator:
    """
    Runs anonymization sweeps for one ExperimentConfig
    """

    def __init__(self, config: ExperimentConfig, show_progress: bool = True):
        """
        Initialize orchestrator

        Args:
            config: experiment configuration
            show_progress: display tqdm progress bars
        """
        config.validate()
        self.config = config
        self.show_progress = show_progress
        self.rng = RngStream(config.seed)
        self.params = StandardWalkParams(config.q_on_to_off, config.q_off_to_on)

        logger.info(
            f"Orchestrator ready: {config.name} ({config.model.value}, {config.walk_kind.value} walk, "
            f"seed {config.seed}, {config.threads} threads)"
        )

    def run_replicate(
        self,
        g0: Graph,
        partition: Optional[Partition],
        n: int,
        replicate: int,
        rng: RngStream
    ) -> ReplicateResult:
        """
        Walk from g0 and match back to it at every checkpoint

        Args:
            g0: initial graph (not modified)
            partition: communities, for the block walk and per-community tracking
            n: vertex count
            replicate: replicate index
            rng: replicate stream

        Returns:
            ReplicateResult (success False with the error on failure)
        """
        config = self.config
        result = ReplicateResult(
            experiment=config.name,
            n=n,
            replicate=replicate,
            success=False,
            community_sizes=None if partition is None else tuple(int(s) for s in partition.sizes)
        )

        try:
            seeds = sample_seeds(n, config.seed_fraction, rng.derive("seeds"))
            n_free = n - len(seeds)
            matcher = MatcherFactory.create_matcher("faq", config.solver, rng.derive("solver"))
            largest_beta = max(config.betas)
            trace: List[TraceRecord] = []
            pair_labels = None if partition is None else community_pair_labels(partition)

            def observe(state: WalkState) -> bool:
                match = matcher.match(g0, state.graph, seeds, partition)
                per_community = None
                if match.per_community_correctness is not None:
                    per_community = tuple(float(v) for v in match.per_community_correctness)
                community_cover = None
                if pair_labels is not None:
                    community_cover = community_cover_rates(state.cover, pair_labels, partition.k)
                trace.append(TraceRecord(
                    step=state.step,
                    correctness=match.correctness,
                    cover_rate=state.cover_rate,
                    per_community=per_community,
                    objective=match.objective,
                    shuffled=match.shuffled,
                    community_cover=community_cover
                ))
                if result.cover_step is None and state.cover.complete:
                    result.cover_step = state.step
                if not config.early_stop:
                    return False
                estimate = detect_anonymization(trace, n, largest_beta, config.persistence, n_free)
                if estimate.t_hat is None:
                    return False
                first = next(i for i, record in enumerate(trace) if record.step == estimate.t_hat)
                return len(trace) >= first + config.persistence + config.tail_checkpoints

            final = run_walk(
                g0,
                config.walk_kind,
                self.params,
                config.step_budget(n),
                config.cadence_for(n),
                observe,
                rng.derive("walk"),
                partition=partition,
                keep_snapshots=False
            )[-1]

            result.trace = trace
            result.seeds = len(seeds)
            result.steps_run = final.step
            result.estimates, result.community_estimates = self._estimate(trace, n, n_free, seeds, partition)
            result.success = True
            logger.info(f"✅ {config.name} n={n} replicate {replicate}: {len(trace)} checkpoints, {final.step} steps")

        except Exception as e:
            logger.error(f"❌ {config.name} n={n} replicate {replicate} failed: {e}")
            result.error = str(e)

        return result

    def _estimate(
        self,
        trace: List[TraceRecord],
        n: int,
        n_free: int,
        seeds: SeedSet,
        partition: Optional[Partition]
    ) -> Tuple[List[AnonymizationEstimate], List[AnonymizationEstimate]]:
        config = self.config
        estimates = [
            detect_anonymization(trace, n, beta, config.persistence, n_free)
            for beta in config.betas
        ]
        community_estimates: List[AnonymizationEstimate] = []
        if partition is not None:
            for beta in config.betas:
                community_estimates.extend(
                    detect_community_anonymization(trace, partition, seeds, beta, config.persistence)
                )
        return estimates, community_estimates

    def _run_jobs(self, jobs: List[Tuple[int, int]], build) -> List[ReplicateResult]:
        """
        Run (n, replicate) jobs in a thread pool

        ``build(n, rng)`` returns the (g0, partition) of a replicate.
        """
        def task(n: int, replicate: int) -> ReplicateResult:
            rng = self.rng.derive(self.config.model.value, n, replicate)
            g0, partition = build(n, rng.derive("graph"))
            return self.run_replicate(g0, partition, n, replicate, rng)

        logger.info(f"Starting {self.config.name}: {len(jobs)} replicates")
        results = []

        with concurrent.futures.ThreadPoolExecutor(max_workers=self.config.threads) as executor:
            futures = {executor.submit(task, n, r): (n, r) for n, r in jobs}

            completed = concurrent.futures.as_completed(futures)
            for i, future in enumerate(tqdm(completed, total=len(futures), disable=not self.show_progress)):
                n, r = futures[future]
                try:
                    results.append(future.result())
                except Exception as e:
                    logger.error(f"Failed to run n={n} replicate {r}: {e}")
                    results.append(ReplicateResult(
                        experiment=self.config.name, n=n, replicate=r, success=False, error=str(e)
                    ))

                if (i + 1) % 10 == 0:
                    logger.info(f"Progress: {i + 1}/{len(jobs)} completed")

        results.sort(key=lambda result: (result.n, result.replicate))
        failed = sum(not result.success for result in results)
        logger.info(f"✅ {self.config.name} completed: {len(results)} replicates, {failed} failed")
        return results

    def _jobs(self, n_values) -> List[Tuple[int, int]]:
        return [(n, r) for n in n_values for r in range(self.config.replicates)]

    def run_er_sweep(self) -> SweepResults:
        """ER(n, p) initial graphs for every configured n"""
        p = self.config.p

        def build(n: int, rng: RngStream):
            return sample_er(n, p, rng), None

        results = self._run_jobs(self._jobs(self.config.n_values), build)
        return SweepResults(self.config.name, self.config, results)

    def run_sbm_sweep(self) -> SweepResults:
        """SBM initial graphs with the block-size and Lambda presets"""
        communities = self.config.communities

        def build(n: int, rng: RngStream):
            return sample_sbm(skewed_sbm_params(n, communities), rng)

        results = self._run_jobs(self._jobs(self.config.n_values), build)
        return SweepResults(self.config.name, self.config, results)

    def run_loaded_graph(self, g0: Graph, partition: Optional[Partition] = None) -> SweepResults:
        """Replicates on one fixed, externally loaded network"""
        if self.config.walk_kind == WalkKind.BLOCK and partition is None:
            raise DataError("The block walk on a loaded graph needs a label file")

        def build(n: int, rng: RngStream):
            return g0, partition

        results = self._run_jobs(self._jobs([g0.n]), build)
        return SweepResults(self.config.name, self.config, results)

    def run(self, g0: Optional[Graph] = None, partition: Optional[Partition] = None) -> SweepResults:
        """Dispatch on the configured graph model"""
        if self.config.model == GraphModel.ER:
            return self.run_er_sweep()
        elif self.config.model == GraphModel.SBM:
            return self.run_sbm_sweep()
        if g0 is None:
            raise DataError("Loaded-graph experiments need a graph")
        return self.run_loaded_graph(g0, partition)


def run_er_sweep(config: ExperimentConfig, show_progress: bool = False) -> SweepResults:
    return ExperimentOrchestrator(config, show_progress).run_er_sweep()


def run_sbm_sweep(config: ExperimentConfig, show_progress: bool = False) -> SweepResults:
    return ExperimentOrchestrator(config, show_progress).run_sbm_sweep()


def run_loaded_graph(
    g0: Graph,
    partition: Optional[Partition],
    config: ExperimentConfig,
    show_progress: bool = False
) -> SweepResults:
    return ExperimentOrchestrator(config, show_progress).run_loaded_graph(g0, partition)
