"""
Anonymization detection, fits, sweeps, exact small-graph checks and reports
"""
import math
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

from src.config import (
    ExperimentConfig,
    GraphModel,
    InitMethod,
    Profile,
    SolverOptions,
    WalkKind,
)
from src.errors import ConfigError, DataError, InvalidParameterError
from src.experiments import (
    AnonymizationEstimate,
    ReplicateResult,
    SweepResults,
    TraceRecord,
    anonymization_tail_bound,
    detect_anonymization,
    detect_community_anonymization,
    loglog_fit,
    matchability_check,
    post_cover_check,
    run_er_sweep,
    run_loaded_graph,
    run_sbm_sweep,
    shuffle_threshold,
)
from src.graph_core import Partition, RngStream, sample_er
from src.matching import SeedSet
from src.utils import community_order_rate, fits_frame, read_trace_csv, summarize_sweep, write_sweep_outputs


# -- Helpers -----------------------------------------------------------------

def _trace(values, step=60, per_community=None):
    return [
        TraceRecord(
            step=i * step,
            correctness=value,
            cover_rate=min(1.0, i / len(values)),
            per_community=None if per_community is None else per_community[i]
        )
        for i, value in enumerate(values)
    ]


def _small_er_config(**overrides):
    values = dict(
        name="er-small",
        model=GraphModel.ER,
        n_values=(12, 16),
        replicates=2,
        max_steps=300,
        checkpoint_every=20,
        early_stop=False,
        seed=3,
        threads=1,
        output_dir="unused",
    )
    values.update(overrides)
    return ExperimentConfig(**values)


def _replicate(n, r, t_half, community=None, sizes=None):
    estimates = [AnonymizationEstimate(0.5, t_half, 3)]
    community_estimates = []
    if community is not None:
        community_estimates = [AnonymizationEstimate(0.5, t, 3, k) for k, t in enumerate(community)]
    return ReplicateResult(
        experiment="synthetic",
        n=n,
        replicate=r,
        success=True,
        trace=_trace([1.0, 0.5]),
        estimates=estimates,
        community_estimates=community_estimates,
        community_sizes=sizes
    )


@pytest.fixture(scope="module")
def er_sweep():
    return run_er_sweep(_small_er_config())


class TestDetection:
    def test_never_anonymized(self):
        assert detect_anonymization(_trace([1.0] * 20), 100, 0.5).t_hat is None

    def test_immediately_anonymized(self):
        estimate = detect_anonymization(_trace([0.0] * 5), 100, 0.5, persistence=1)
        assert estimate.t_hat == 0
        assert estimate.detected

    def test_transient_dip_ignored(self):
        steps = range(0, 1200, 60)
        values = [0.5 if s == 300 or s >= 480 else 1.0 for s in steps]
        estimate = detect_anonymization(_trace(values), 100, 0.5, persistence=3)
        assert estimate.t_hat == 480
        assert estimate.to_dict()['estimator'] == "persistence-window"

    def test_monotone_in_beta(self):
        generator = np.random.default_rng(4)
        for _ in range(50):
            values = np.clip(np.linspace(1.0, 0.0, 40) + generator.normal(0, 0.1, 40), 0, 1)
            trace = _trace(values.tolist())
            times = [detect_anonymization(trace, 64, beta).t_hat for beta in (0.25, 0.5, 0.75)]
            times = [math.inf if t is None else t for t in times]
            assert times == sorted(times)

    def test_threshold(self):
        assert shuffle_threshold(100, 0.5, 100) == pytest.approx(0.9)
        assert shuffle_threshold(100, 0.5, 95) == pytest.approx(1 - 10 / 95)
        assert shuffle_threshold(10, 0.5, 0) == -np.inf

    def test_free_count_lowers_threshold(self):
        trace = _trace([0.89] * 5)
        assert detect_anonymization(trace, 100, 0.5, persistence=1).t_hat == 0
        assert detect_anonymization(trace, 100, 0.5, persistence=1, n_free=50).t_hat is None

    def test_bad_arguments(self):
        with pytest.raises(InvalidParameterError):
            detect_anonymization([], 10, 0.5)
        with pytest.raises(InvalidParameterError):
            detect_anonymization(_trace([1.0]), 10, 1.0)
        with pytest.raises(InvalidParameterError):
            detect_anonymization(_trace([1.0]), 10, 0.5, persistence=0)

    def test_per_community(self):
        partition = Partition.from_sizes([4, 16])
        rows = [(1.0, 1.0)] + [(0.25, 1.0)] * 5
        trace = _trace([1.0] * 6, step=10, per_community=rows)
        estimates = detect_community_anonymization(trace, partition, SeedSet.empty(), 0.5, 3)
        assert [e.t_hat for e in estimates] == [10, None]
        assert [e.scope for e in estimates] == ["community_1", "community_2"]

    def test_fully_seeded_community_never_detected(self):
        partition = Partition.from_sizes([2, 3])
        rows = [(np.nan, 0.0)] * 4
        trace = _trace([0.0] * 4, per_community=rows)
        estimates = detect_community_anonymization(trace, partition, SeedSet([0, 1], 5), 0.5, 1)
        assert estimates[0].t_hat is None
        assert estimates[1].t_hat == 0

    def test_per_community_needs_columns(self):
        with pytest.raises(InvalidParameterError):
            detect_community_anonymization(_trace([1.0]), Partition.from_sizes([2]), SeedSet.empty(), 0.5)


class TestLogLogFit:
    def test_quadratic(self):
        fit = loglog_fit([(n, n ** 2) for n in (49, 100, 144, 225, 324, 729)])
        assert fit.slope == pytest.approx(2.0, abs=1e-12)
        assert fit.predict(10) == pytest.approx(100.0)

    def test_quadratic_log(self):
        fit = loglog_fit([(n, n * n * math.log(n)) for n in (49, 100, 144, 225, 324, 729)])
        assert fit.slope == pytest.approx(2.19, abs=0.03)

    def test_constant_multiple(self):
        fit = loglog_fit([(n, 7.5 * n ** 1.6) for n in (10, 20, 40, 80)])
        assert fit.slope == pytest.approx(1.6, abs=1e-10)
        assert np.abs(fit.residuals).max() < 1e-10

    def test_invalid_points(self):
        with pytest.raises(InvalidParameterError):
            loglog_fit([(10, 5.0)])
        with pytest.raises(InvalidParameterError):
            loglog_fit([(10, 5.0), (20, 0.0)])
        with pytest.raises(InvalidParameterError):
            loglog_fit([(10, 5.0), (10, 6.0)])


class TestSweepResults:
    def test_median_and_fit(self):
        config = ExperimentConfig(betas=(0.5,), seed=0, threads=1)
        replicates = [
            _replicate(49, 0, 100), _replicate(49, 1, 200), _replicate(49, 2, None),
            _replicate(100, 0, 400), _replicate(100, 1, 600),
        ]
        results = SweepResults("synthetic", config, replicates)
        assert results.median_t_hat(0.5) == {49: 150.0, 100: 500.0}
        fit = results.fit(0.5)
        assert fit.slope == pytest.approx(math.log(500 / 150) / math.log(100 / 49))
        assert results.fit(0.5, scope="community_1") is None

    def test_failed_replicates_excluded(self):
        config = ExperimentConfig(betas=(0.5,), seed=0, threads=1)
        failed = ReplicateResult("synthetic", 49, 1, success=False, error="boom")
        results = SweepResults("synthetic", config, [_replicate(49, 0, 100), failed])
        assert len(results.successful) == 1
        assert len(results.failed) == 1
        assert results.median_t_hat(0.5) == {49: 100.0}
        assert results.to_frame()['success'].tolist() == [True, False]

    def test_replicate_lookup(self):
        result = _replicate(81, 0, 300, community=[100, 500], sizes=(3, 18))
        assert result.t_hat(0.5) == 300
        assert result.t_hat(0.5, 1) == 500
        assert result.t_hat(0.25) is None


class TestErSweep:
    def test_traces_well_formed(self, er_sweep):
        assert len(er_sweep.successful) == 4
        for result in er_sweep.successful:
            steps = [record.step for record in result.trace]
            assert steps == list(range(0, 301, 20))
            cover = [record.cover_rate for record in result.trace]
            assert cover == sorted(cover)
            assert result.trace[0].cover_rate == 0.0
            assert result.seeds == round(0.05 * result.n)
            assert len(result.estimates) == 3

    def test_byte_identical_across_threads(self, er_sweep, tmp_path):
        again = run_er_sweep(_small_er_config(threads=2))
        first = write_sweep_outputs(er_sweep, str(tmp_path / "a"), plots=False)
        second = write_sweep_outputs(again, str(tmp_path / "b"), plots=False)
        names = sorted(p.relative_to(first) for p in first.rglob("*.csv"))
        assert names == sorted(p.relative_to(second) for p in second.rglob("*.csv"))
        assert len(names) == 4 + 3
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_no_noise_control(self):
        config = _small_er_config(
            n_values=(12,), replicates=1, q_on_to_off=0.0, q_off_to_on=0.0,
            solver=SolverOptions(init=InitMethod.IDENTITY)
        )
        result = run_er_sweep(config).successful[0]
        assert all(record.correctness == 1.0 for record in result.trace)
        assert result.t_hat(0.5) is None

    def test_early_stop_shortens_run(self):
        config = _small_er_config(n_values=(12,), replicates=1, max_steps=3000, early_stop=True, tail_checkpoints=2)
        result = run_er_sweep(config).successful[0]
        t_hat = result.t_hat(0.75)
        assert result.steps_run == result.trace[-1].step
        if t_hat is not None:
            first = [record.step for record in result.trace].index(t_hat)
            assert len(result.trace) <= first + 3 + 2
            if result.steps_run < 3000:
                assert len(result.trace) == first + 3 + 2


class TestLoadedAndSbm:
    def test_zero_step_run_fully_seeded(self):
        g0 = sample_er(15, 0.4, RngStream(2))
        config = ExperimentConfig(
            name="loaded-zero", model=GraphModel.LOADED, n_values=(), max_steps=0,
            checkpoint_every=1, seed_fraction=1.0, replicates=1, seed=1, threads=1
        )
        results = run_loaded_graph(g0, None, config)
        trace = results.successful[0].trace
        assert len(trace) == 1
        assert trace[0].step == 0
        assert trace[0].correctness == 1.0

    def test_block_walk_needs_labels(self):
        config = ExperimentConfig(
            model=GraphModel.LOADED, n_values=(), walk_kind=WalkKind.BLOCK, seed=1, threads=1
        )
        with pytest.raises(DataError):
            run_loaded_graph(sample_er(10, 0.5, RngStream(1)), None, config)

    def test_block_walk_on_loaded_graph(self, two_blocks):
        g0, partition = two_blocks
        config = ExperimentConfig(
            name="loaded-block", model=GraphModel.LOADED, n_values=(), walk_kind=WalkKind.BLOCK,
            max_steps=60, checkpoint_every=10, early_stop=False, replicates=2, seed=4, threads=1
        )
        results = run_loaded_graph(g0, partition, config)
        assert len(results.successful) == 2
        for result in results.successful:
            assert result.community_sizes == (4, 4)
            assert all(len(record.per_community) == 2 for record in result.trace)
            assert len(result.community_estimates) == 2 * 3

    def test_block_run_records_community_cover(self, two_blocks, tmp_path):
        g0, partition = two_blocks
        config = ExperimentConfig(
            name="loaded-cover", model=GraphModel.LOADED, n_values=(), walk_kind=WalkKind.BLOCK,
            max_steps=200, checkpoint_every=20, early_stop=False, replicates=1, seed=4, threads=1
        )
        results = run_loaded_graph(g0, partition, config)
        trace = results.successful[0].trace
        covers = np.array([record.community_cover for record in trace])
        assert covers.shape == (11, 2)
        assert (covers[0] == 0.0).all()
        assert (np.diff(covers, axis=0) >= 0).all()
        assert ((covers >= 0.0) & (covers <= 1.0)).all()
        # four vertices per community: rates are multiples of 1/6
        assert np.allclose(covers * 6, np.round(covers * 6))

        root = write_sweep_outputs(results, str(tmp_path))
        frame = pd.read_csv(root / "traces" / "n8_rep0.csv")
        assert {"cover_community_1", "cover_community_2"} <= set(frame.columns)
        assert read_trace_csv(str(root / "traces" / "n8_rep0.csv")) == trace

    def test_sbm_sweep_per_community_estimates(self):
        config = ExperimentConfig(
            name="sbm-small", model=GraphModel.SBM, n_values=(81,), walk_kind=WalkKind.BLOCK,
            max_steps=200, checkpoint_every=50, early_stop=False, replicates=1,
            solver=SolverOptions(init=InitMethod.IDENTITY), seed=5, threads=1
        )
        result = run_sbm_sweep(config).successful[0]
        assert result.community_sizes == (3, 18, 18, 18, 24)
        for beta in config.betas:
            assert len([e for e in result.community_estimates if e.beta == beta]) == 5
        assert [record.step for record in result.trace] == [0, 50, 100, 150, 200]

    @pytest.mark.parametrize("walk_kind", [WalkKind.BLOCK, WalkKind.STANDARD])
    def test_sbm_byte_identical_across_threads(self, walk_kind, tmp_path):
        roots = []
        for threads in (1, 4):
            config = replace(
                ExperimentConfig.preset("sbm-ci"), name="sbm-threads", n_values=(81,), replicates=3,
                walk_kind=walk_kind, max_steps=120, checkpoint_every=30, early_stop=False,
                seed=6, threads=threads, output_dir="unused"
            )
            roots.append(write_sweep_outputs(run_sbm_sweep(config), str(tmp_path / f"threads{threads}")))
        first, second = roots
        names = sorted(p.relative_to(first) for p in first.rglob("*") if p.suffix in (".csv", ".svg"))
        assert names == sorted(p.relative_to(second) for p in second.rglob("*") if p.suffix in (".csv", ".svg"))
        assert len([name for name in names if name.suffix == ".csv"]) == 3 + 3
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes()


class TestTheoryChecks:
    def test_tail_bound(self):
        base = 2 * 100 ** 0.5
        assert anonymization_tail_bound(100, 0.5) == pytest.approx(1e-4 + base ** (1 - 100 / (base + 1)))
        with pytest.raises(InvalidParameterError):
            anonymization_tail_bound(100, 0.0)

    def test_matchability_structure(self):
        report = matchability_check(5, 0.5, 2, 10, RngStream(1))
        assert len(report.max_shuffles) == 10
        assert 0.0 <= report.rate <= 1.0
        assert report.threshold == pytest.approx(2 * math.sqrt(5))

    def test_post_cover_structure(self):
        report = post_cover_check(4, 0.5, 5, RngStream(2))
        assert len(report.observed) == len(report.null) == 5
        assert report.censored == 0
        assert (report.cover_steps >= 3).all()
        assert 0.0 <= report.p_value <= 1.0
        assert report.tail_bound == pytest.approx(anonymization_tail_bound(4, 0.5))

    @pytest.mark.parametrize("n", [1, 10])
    def test_size_limits(self, n):
        with pytest.raises(InvalidParameterError):
            matchability_check(n, 0.5, 3, 5, RngStream(1))
        with pytest.raises(InvalidParameterError):
            post_cover_check(n, 0.5, 5, RngStream(1))

    @pytest.mark.slow
    def test_small_t_matchability(self):
        report = matchability_check(8, 0.5, 3, 200, RngStream(2024))
        assert report.rate >= 0.9, f"matchable in {report.rate:.1%} of replicates"

    @pytest.mark.slow
    def test_post_cover_anonymization(self):
        report = post_cover_check(8, 0.5, 200, RngStream(2025))
        assert report.identity_unique_rate < 0.2
        assert report.p_value > 0.01


class TestSlowSweeps:
    @pytest.fixture(scope="class")
    def er_ci(self):
        config = ExperimentConfig.preset("er-ci")
        config.threads = 4
        return run_er_sweep(config)

    @pytest.mark.slow
    def test_er_slope(self, er_ci):
        fit = er_ci.fit(0.5)
        assert fit is not None
        assert 1.8 <= fit.slope <= 2.4

    @pytest.mark.slow
    def test_sbm_local_anonymization(self, er_ci):
        config = ExperimentConfig.preset("sbm-ci")
        config.threads = 4
        sbm = run_sbm_sweep(config)
        for n, rate in community_order_rate(sbm, 0.5).items():
            assert rate >= 0.8, f"n={n}: smallest community first in {rate:.0%}"
        sbm_fit = sbm.fit(0.5)
        assert sbm_fit is not None
        assert sbm_fit.slope <= er_ci.fit(0.5).slope - 0.2


class TestConfig:
    def test_from_file(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text(
            '[experiment]\n'
            'name = "toml-run"\n'
            'model = "er"\n'
            'n_values = [12, 16]\n'
            'replicates = 2\n'
            '\n'
            '[walk]\n'
            'walk_kind = "standard"\n'
            'q_on_to_off = 0.4\n'
            'checkpoint_every = 5\n'
            '\n'
            '[solver]\n'
            'init = "identity"\n'
            'restarts = 2\n'
        )
        config = ExperimentConfig.from_file(str(path))
        assert config.name == "toml-run"
        assert config.n_values == (12, 16)
        assert config.q_on_to_off == 0.4
        assert config.cadence_for(16) == 5
        assert config.solver == SolverOptions(init=InitMethod.IDENTITY, restarts=2)
        assert config.validate()

    def test_preset_inside_file(self, tmp_path):
        path = tmp_path / "preset.toml"
        path.write_text('[experiment]\npreset = "sbm-ci"\nreplicates = 1\n')
        config = ExperimentConfig.from_file(str(path))
        assert config.model == GraphModel.SBM
        assert config.walk_kind == WalkKind.BLOCK
        assert config.replicates == 1

    def test_unknown_keys_and_tables(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'experiment': {'colour': 'red'}})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'plots': {}})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({'walk': {'walk_kind': 'zigzag'}})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_file(str(tmp_path / "absent.toml"))

    def test_presets(self):
        for name in ("er-ci", "er-full", "sbm-ci", "sbm-full", "facebook", "eu-email"):
            config = ExperimentConfig.preset(name)
            assert config.name == name
        assert ExperimentConfig.preset("facebook").vertex_range == (1921, 2640)
        with pytest.raises(ConfigError):
            ExperimentConfig.preset("er-huge")

    def test_full_cadences(self):
        er = ExperimentConfig.preset("er-full")
        assert [er.cadence_for(n) for n in (49, 100, 144, 225, 324, 729)] == [1, 1, 1, 3, 30, 300]
        sbm = ExperimentConfig.preset("sbm-full")
        assert [sbm.cadence_for(n) for n in (81, 256, 625)] == [1, 90, 2100]
        assert ExperimentConfig.preset("eu-email").cadence_for(986) == 220

    def test_ci_cadence(self):
        config = ExperimentConfig(profile=Profile.CI, seed=0, threads=1)
        assert config.step_budget(49) == math.ceil(3 * 49 * 49 * math.log(49))
        assert config.cadence_for(49) == 187

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(betas=(0.5, 1.0), seed=0, threads=1).validate()
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(checkpoint_every=0, seed=0, threads=1).validate()
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(replicates=0, seed=0, threads=1).validate()
        with pytest.raises(InvalidParameterError):
            ExperimentConfig(n_values=(1, 49), seed=0, threads=1).validate()

    def test_environment_defaults(self, monkeypatch):
        monkeypatch.setenv('EDGELIGHTER_SEED', '17')
        monkeypatch.setenv('EDGELIGHTER_THREADS', '3')
        config = ExperimentConfig()
        assert (config.seed, config.threads) == (17, 3)

    def test_to_dict(self):
        data = ExperimentConfig.preset("sbm-ci").to_dict()
        assert data['model'] == "sbm"
        assert data['solver']['init'] == "identity"
        assert data['n_values'] == [81, 256]


class TestReports:
    def test_summary(self, er_sweep):
        summary = summarize_sweep(er_sweep)
        assert list(summary.columns) == ['n', 'beta', 'scope', 'replicates', 'detected', 'median_t_hat', 'n2logn', 'ratio']
        assert set(summary['n']) == {12, 16}
        assert (summary['replicates'] == 2).all()

    def test_community_order_rate(self):
        config = ExperimentConfig(betas=(0.5,), seed=0, threads=1)
        replicates = [
            _replicate(81, 0, 300, community=[100, 500], sizes=(3, 18)),
            _replicate(81, 1, 300, community=[None, 500], sizes=(3, 18)),
            _replicate(81, 2, 300, community=[100, None], sizes=(3, 18)),
            _replicate(81, 3, 300, community=[200, 200], sizes=(3, 18)),
        ]
        assert community_order_rate(SweepResults("synthetic", config, replicates)) == {81: 0.5}

    def test_fits_frame(self):
        config = ExperimentConfig(betas=(0.5,), seed=0, threads=1)
        replicates = [_replicate(49, 0, 100), _replicate(100, 0, 400)]
        fits = fits_frame(SweepResults("synthetic", config, replicates))
        assert fits['scope'].tolist() == ['global']
        assert fits['slope'].iloc[0] == pytest.approx(math.log(4) / math.log(100 / 49))

    def test_outputs_and_svg_determinism(self, er_sweep, tmp_path):
        first = write_sweep_outputs(er_sweep, str(tmp_path / "a"))
        second = write_sweep_outputs(er_sweep, str(tmp_path / "b"))
        for name in ("replicates.csv", "summary.csv", "fits.csv", "traces/n12_rep0.csv", "traces/n16_rep1.svg"):
            assert (first / name).exists()
        for svg in first.rglob("*.svg"):
            assert svg.read_bytes() == (second / svg.relative_to(first)).read_bytes()
