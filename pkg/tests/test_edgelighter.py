"""
Edgelighter walks, cover tracking and Monte Carlo estimators
"""
import math
import tracemalloc

import numpy as np
import pytest
from scipy import stats

from src.config import WalkKind
from src.edgelighter import (
    BlockWalk,
    BlockWalkParams,
    CoverTracker,
    StandardWalk,
    StandardWalkParams,
    WalkFactory,
    community_cover_rates,
    community_pair_labels,
    coverable_pairs,
    cross_edge_counts,
    edge_correlation,
    estimate_traversal_prob,
    run_walk,
    step_block,
    step_global,
    step_standard,
    traversal_bounds,
)
from src.edgelighter import estimators
from src.edgelighter.base import occurrence_rounds
from src.errors import DataError, DimensionMismatchError, InvalidParameterError, UndefinedCorrelationError
from src.graph_core import Graph, Partition, RngStream, num_pairs, pair_index, sample_er


# -- Helpers -----------------------------------------------------------------

def _positions(n, steps, rng):
    """Walker positions L_0..L_steps of a standard walk"""
    seen = []
    run_walk(
        Graph(n), WalkKind.STANDARD, StandardWalkParams(), steps, 1,
        lambda state: seen.append(state.position), rng, keep_snapshots=False
    )
    return np.array(seen)


class TestParams:
    def test_probabilities_validated(self):
        with pytest.raises(InvalidParameterError):
            StandardWalkParams(1.2, 0.5)
        with pytest.raises(InvalidParameterError):
            BlockWalkParams((0.5, -0.1), (0.5, 0.5))

    def test_block_vectors_same_length(self):
        with pytest.raises(DimensionMismatchError):
            BlockWalkParams((0.5, 0.5), (0.5,))

    def test_uniform_block_params(self):
        params = BlockWalkParams.uniform(3, 0.2, 0.7)
        assert params.k == 3
        assert params.community(2) == StandardWalkParams(0.2, 0.7)


class TestCoverTracker:
    def test_mark_and_complete(self):
        tracker = CoverTracker(3)
        tracker.mark(0, 1)
        tracker.mark(0, 2)
        assert tracker.covered_count == 1
        assert not tracker.complete
        tracker.mark_batch(np.array([2, 1, 2]), np.array([3, 4, 5]))
        assert tracker.covered_count == 3
        assert tracker.cover_rate == 1.0
        assert tracker.cover_time == 4

    def test_coverable_mask(self):
        tracker = CoverTracker(4, coverable=np.array([True, False, True, False]))
        tracker.mark(1, 1)
        assert tracker.covered_count == 0
        tracker.mark_batch(np.array([0, 2]), np.array([2, 3]))
        assert tracker.complete
        assert tracker.cover_time == 3

    def test_copy_is_independent(self):
        tracker = CoverTracker(3)
        clone = tracker.copy()
        tracker.mark(1, 1)
        assert clone.covered_count == 0

    def test_walk_cover_is_monotone(self, rng):
        rates, complete = [], []

        def observe(state):
            rates.append(state.cover_rate)
            complete.append((state.cover_rate == 1.0, state.cover.cover_time is not None))

        run_walk(Graph(6), WalkKind.STANDARD, StandardWalkParams(), 600, 5, observe, rng, keep_snapshots=False)
        assert np.all(np.diff(rates) >= 0)
        assert all(0.0 <= r <= 1.0 for r in rates)
        assert all(full == timed for full, timed in complete)
        assert rates[-1] == 1.0

    def test_community_cover_rates(self):
        partition = Partition.from_sizes([2, 3])
        labels = community_pair_labels(partition)
        assert labels.tolist() == [0, -1, -1, -1, -1, -1, -1, 1, 1, 1]
        tracker = CoverTracker(num_pairs(5))
        assert community_cover_rates(tracker, labels, 2) == (0.0, 0.0)
        tracker.mark(pair_index(0, 1, 5), 1)
        tracker.mark(pair_index(2, 3, 5), 2)
        tracker.mark(pair_index(1, 2, 5), 3)
        assert community_cover_rates(tracker, labels, 2) == (1.0, pytest.approx(1 / 3))

    def test_single_vertex_community_counts_as_covered(self):
        partition = Partition.from_sizes([1, 4])
        tracker = CoverTracker(num_pairs(5))
        assert community_cover_rates(tracker, community_pair_labels(partition), 2) == (1.0, 0.0)

    def test_occurrence_rounds_preserve_order(self):
        pairs = np.array([4, 1, 4, 4, 2, 1])
        rounds = occurrence_rounds(pairs)
        assert [r.tolist() for r in rounds] == [[0, 1, 4], [2, 5], [3]]


class TestStandardWalk:
    def test_zero_probabilities_keep_graph(self, rng):
        g0 = sample_er(12, 0.5, rng.derive("graph"))
        snapshots = run_walk(g0, WalkKind.STANDARD, StandardWalkParams(0.0, 0.0), 500, 50, None, rng)
        assert len(snapshots) == 11
        assert all(s.graph == g0 for s in snapshots)

    def test_full_flip_on_triangle(self, triangle):
        params = StandardWalkParams(1.0, 1.0)
        walk = StandardWalk(3, params)
        self_jumps = 0
        for seed in range(60):
            state = walk.initial_state(triangle, RngStream(seed), position=0)
            step_standard(state, params, RngStream(seed, 1))
            changed = np.flatnonzero(state.graph.edges != triangle.edges)
            assert state.step == 1
            if state.position == 0:
                self_jumps += 1
                assert len(changed) == 0
                assert state.cover.covered_count == 0
            else:
                assert changed.tolist() == [pair_index(0, state.position, 3)]
                assert state.cover.covered_count == 1
        assert self_jumps > 0

    def test_initial_graph_untouched(self, rng):
        g0 = sample_er(8, 0.5, rng.derive("graph"))
        before = g0.copy()
        run_walk(g0, WalkKind.STANDARD, StandardWalkParams(), 200, 10, None, rng)
        assert g0 == before

    def test_covered_lamps_forget_initial_value(self):
        q2 = 0.3
        params = StandardWalkParams(q_on_to_off=1 - q2, q_off_to_on=q2)
        root = RngStream(31)
        for g0 in (Graph(5), Graph.complete(5)):
            lit, total = 0, 0
            for r in range(2000):
                final = run_walk(
                    g0, WalkKind.STANDARD, params, 6, 6, None, root.derive(g0.edge_count, r), keep_snapshots=False
                )[-1]
                covered = final.cover.covered
                lit += int(np.count_nonzero(final.graph.edges[covered]))
                total += int(np.count_nonzero(covered))
            sigma = math.sqrt(q2 * (1 - q2) / total)
            assert abs(lit / total - q2) < 4 * sigma

    def test_positions_uniform(self):
        positions = _positions(10, 20000, RngStream(3))
        counts = np.bincount(positions, minlength=10)
        assert stats.chisquare(counts).pvalue > 1e-4

    def test_consecutive_pairs_uniform(self):
        n = 6
        positions = _positions(n, 20001, RngStream(4))
        first, second = positions[0::2], positions[1::2]
        lo, hi = np.minimum(first, second), np.maximum(first, second)
        cells = lo * n + hi
        categories = [u * n + v for u in range(n) for v in range(u, n)]
        observed = np.array([np.count_nonzero(cells == c) for c in categories])
        expected = np.array([(1 if c // n == c % n else 2) / n ** 2 for c in categories]) * len(cells)
        assert stats.chisquare(observed, expected).pvalue > 1e-4


class TestBlockWalk:
    def test_single_community_only_stays(self, rng):
        partition = Partition.from_sizes([6])
        params = BlockWalkParams.uniform(1)
        g0 = sample_er(6, 0.5, rng.derive("graph"))
        communities = []
        run_walk(
            g0, WalkKind.BLOCK, params, 300, 1, lambda s: communities.append(s.community),
            rng, partition=partition, keep_snapshots=False
        )
        assert set(communities) == {0}

    def test_cross_counts_conserved(self, two_blocks, rng):
        g0, partition = two_blocks
        initial = cross_edge_counts(g0, partition)
        assert initial[0, 1] == 3
        checks = []

        def observe(state):
            counts = cross_edge_counts(state.graph, partition)
            checks.append(counts[0, 1] == 3 and state.graph.edge_count == state.graph.recount())
            checks.append(partition.labels[state.position] == state.community)

        run_walk(
            g0, WalkKind.BLOCK, BlockWalkParams.uniform(2), 10_000, 1, observe,
            rng, partition=partition, keep_snapshots=False
        )
        assert len(checks) == 2 * 10_001
        assert all(checks)

    def test_step_block_leave_branch(self, two_blocks):
        g0, partition = two_blocks
        params = BlockWalkParams.uniform(2)
        walk = BlockWalk(partition, params)
        moved = 0
        for seed in range(40):
            state = walk.initial_state(g0, RngStream(seed), position=0)
            step_block(state, params, partition, RngStream(seed, 1))
            if state.community == 1:
                moved += 1
                assert state.position >= 4
                assert cross_edge_counts(state.graph, partition)[0, 1] == 3
        assert moved > 0

    def test_degenerate_swap_only_moves(self, rng):
        partition = Partition.from_sizes([2, 2])
        g0 = Graph.from_edge_list(4, [(0, 1), (2, 3)])
        mask = coverable_pairs(g0, partition)
        assert mask.tolist() == [True, False, False, False, False, True]
        final = run_walk(
            g0, WalkKind.BLOCK, BlockWalkParams.uniform(2, 0.0, 0.0), 500, 500, None,
            rng, partition=partition, keep_snapshots=False
        )[-1]
        assert final.graph == g0
        assert final.cover.complete

    def test_partition_required(self):
        with pytest.raises(DataError):
            WalkFactory.create_walk(WalkKind.BLOCK, 4, StandardWalkParams())

    def test_partition_size_checked(self):
        with pytest.raises(InvalidParameterError):
            WalkFactory.create_walk("block", 5, StandardWalkParams(), Partition.from_sizes([2, 2]))


class TestRunWalk:
    def test_zero_steps(self, rng):
        g0 = sample_er(7, 0.5, rng.derive("graph"))
        snapshots = run_walk(g0, WalkKind.STANDARD, StandardWalkParams(), 0, 1, None, rng)
        assert len(snapshots) == 1
        assert snapshots[0].step == 0
        assert snapshots[0].graph == g0
        assert snapshots[0].cover.covered_count == 0

    def test_checkpoint_steps(self, rng):
        snapshots = run_walk(Graph(5), WalkKind.STANDARD, StandardWalkParams(), 10, 3, None, rng)
        assert [s.step for s in snapshots] == [0, 3, 6, 9]

    def test_same_seed_same_snapshots(self):
        g0 = sample_er(15, 0.5, RngStream(1))
        first = run_walk(g0, "standard", StandardWalkParams(), 2000, 100, None, RngStream(2))
        second = run_walk(g0, "standard", StandardWalkParams(), 2000, 100, None, RngStream(2))
        assert [(s.position, s.graph.to_bytes(), s.cover.covered_count) for s in first] == \
            [(s.position, s.graph.to_bytes(), s.cover.covered_count) for s in second]

    @pytest.mark.parametrize("kind", ["standard", "block"])
    def test_trajectory_independent_of_cadence(self, kind, two_blocks):
        g0, partition = two_blocks
        params = StandardWalkParams(0.3, 0.6)
        finals = [
            run_walk(g0, kind, params, 1234, every, None, RngStream(5), partition=partition, keep_snapshots=False)[-1]
            for every in (1, 7, 1234)
        ]
        assert all(f.graph == finals[0].graph for f in finals)
        assert len({f.position for f in finals}) == 1
        assert len({f.cover.covered_count for f in finals}) == 1

    def test_observer_stops_walk(self, rng):
        snapshots = run_walk(
            Graph(5), WalkKind.STANDARD, StandardWalkParams(), 10_000, 1,
            lambda state: state.cover.complete, rng
        )
        final = snapshots[-1]
        assert final.cover.complete
        assert final.step == final.cover.cover_time
        assert final.step < 10_000

    def test_invalid_cadence(self, rng):
        with pytest.raises(InvalidParameterError):
            run_walk(Graph(4), WalkKind.STANDARD, StandardWalkParams(), 10, 0, None, rng)


class TestGlobalWalk:
    def test_each_step_covers_one_pair(self, rng):
        walk = WalkFactory.create_walk(WalkKind.GLOBAL, 6, StandardWalkParams())
        state = walk.initial_state(Graph(6), rng)
        step_global(state, StandardWalkParams(), rng)
        assert state.cover.covered_count == 1
        assert state.step == 1

    def test_global_walk_covers_everything(self, rng):
        final = run_walk(
            Graph(5), WalkKind.GLOBAL, StandardWalkParams(), 5000, 5000, None, rng, keep_snapshots=False
        )[-1]
        assert final.cover.complete


class TestEstimators:
    def test_bounds_closed_form(self):
        exact_lower, exact_upper, lower, upper = traversal_bounds(10, 100)
        assert lower == pytest.approx(0.1030, abs=5e-5)
        assert upper == pytest.approx(0.4029, abs=5e-5)
        assert exact_lower <= exact_upper
        assert lower <= exact_lower

    def test_bounds_need_n_above_3(self):
        with pytest.raises(InvalidParameterError):
            traversal_bounds(3, 10)

    def test_block_size_does_not_change_estimate(self, monkeypatch):
        default = estimate_traversal_prob(12, 300, 1000, RngStream(4))
        monkeypatch.setattr(estimators, '_BLOCK_ELEMENTS', 7000)
        assert estimate_traversal_prob(12, 300, 1000, RngStream(4)) == default

    def test_long_horizon_stops_once_all_hit(self):
        estimate = estimate_traversal_prob(30, 60_000, 5000, RngStream(1))
        assert estimate.p_hat == 0.0
        assert estimate.replicates == 5000

    def test_long_horizon_memory_is_bounded(self):
        tracemalloc.start()
        try:
            estimate = estimate_traversal_prob(2000, 20_000, 600, RngStream(8))
            _, peak = tracemalloc.get_traced_memory()
        finally:
            tracemalloc.stop()
        assert peak < 32 * 2 ** 20
        assert estimate.p_hat > 0.9

    def test_zero_steps_untraversed(self, rng):
        estimate = estimate_traversal_prob(10, 0, 500, rng)
        assert estimate.p_hat == 1.0
        assert estimate.stderr == 0.0

    @pytest.mark.parametrize("n, t", [(10, 50), (10, 100), (20, 400)])
    def test_estimate_within_bounds(self, n, t):
        estimate = estimate_traversal_prob(n, t, 100_000, RngStream(n * 1000 + t))
        assert estimate.lower_bound - 4 * estimate.stderr <= estimate.p_hat
        assert estimate.p_hat <= estimate.upper_bound + 4 * estimate.stderr

    def test_correlation_at_time_zero(self, rng):
        g = sample_er(10, 0.5, rng)
        assert edge_correlation(g, g.copy()) == pytest.approx(1.0)

    def test_correlation_undefined_for_constant_margin(self):
        with pytest.raises(UndefinedCorrelationError):
            edge_correlation(Graph(5), Graph.complete(5))

    def test_independent_graphs_uncorrelated(self):
        root = RngStream(6)
        pairs = [(sample_er(10, 0.5, root.derive("a", r)), sample_er(10, 0.5, root.derive("b", r))) for r in range(400)]
        corr = edge_correlation(*pairs[0], pairs[1:])
        size = 400 * num_pairs(10)
        assert abs(corr) < 4 / math.sqrt(size)

    @pytest.mark.slow
    def test_correlation_matches_traversal_probability(self):
        n, t, replicates = 10, 100, 10_000
        params = StandardWalkParams(0.5, 0.5)
        root = RngStream(12)
        pairs = []
        for r in range(replicates):
            g0 = sample_er(n, 0.5, root.derive("graph", r))
            gt = run_walk(g0, WalkKind.STANDARD, params, t, t, None, root.derive("walk", r), keep_snapshots=False)[-1].graph
            pairs.append((g0, gt))
        corr = edge_correlation(*pairs[0], pairs[1:])
        estimate = estimate_traversal_prob(n, t, 100_000, root.derive("traversal"))
        sigma = math.sqrt(estimate.stderr ** 2 + 1.0 / replicates)
        assert abs(corr - estimate.p_hat) < 4 * sigma
