"""
Linear assignment, exhaustive matching, seeded Frank-Wolfe and correctness
"""
import logging
from itertools import permutations

import numpy as np
import pytest

from src.config import InitMethod, SolverOptions, WalkKind
from src.edgelighter import StandardWalkParams, run_walk
from src.errors import InstanceTooLargeError, InvalidParameterError
from src.graph_core import Graph, Partition, PermutationMap, RngStream, gmp_objective, sample_er
from src.matching import (
    BaseMatcher,
    MatchResult,
    MatcherFactory,
    SeedSet,
    SeedViolationError,
    assignment_cost,
    brute_force_gmp,
    lap_solve,
    match_correctness,
    sample_seeds,
    sgm_faq,
)


# -- Helpers -----------------------------------------------------------------

PERMS_8 = np.array(list(permutations(range(8))))


def _oracle(a, b, seeds=()):
    """Exhaustive maximum and maximizers computed pair by pair"""
    best, optima = -1, []
    for image in permutations(range(a.n)):
        if any(image[s] != s for s in seeds):
            continue
        p = PermutationMap(image)
        value = gmp_objective(a, b, p)
        if value > best:
            best, optima = value, [p]
        elif value == best:
            optima.append(p)
    return best, optima


class _SeedMover(BaseMatcher):
    def __init__(self):
        super().__init__("rogue")

    def solve(self, a, b, seeds):
        image = np.roll(np.arange(a.n), 1)
        return MatchResult(permutation=PermutationMap(image), objective=0, correctness=0.0)


class TestLapSolve:
    def test_diagonal_cost_gives_identity(self):
        cost = np.ones((6, 6)) - np.eye(6)
        assert lap_solve(cost).is_identity()

    def test_ties_resolve_to_identity(self):
        assert lap_solve(np.zeros((7, 7))).is_identity()
        assert lap_solve(np.full((4, 4), 3.5)).is_identity()

    def test_optimal_against_enumeration(self):
        generator = np.random.default_rng(12)
        rows = np.arange(8)
        for _ in range(200):
            cost = generator.random((8, 8))
            best = cost[rows, PERMS_8].sum(axis=1).min()
            assert assignment_cost(cost, lap_solve(cost)) == pytest.approx(best, abs=1e-9)

    def test_invariant_under_row_column_shifts_and_scaling(self):
        generator = np.random.default_rng(3)
        for _ in range(20):
            cost = generator.random((9, 9))
            p = lap_solve(cost)
            shifted = cost + generator.random(9)[:, None] + generator.random(9)[None, :]
            assert lap_solve(shifted) == p
            assert lap_solve(3.0 * cost) == p

    def test_rejects_non_finite(self):
        cost = np.zeros((3, 3))
        cost[1, 2] = np.inf
        with pytest.raises(InvalidParameterError):
            lap_solve(cost)


class TestBruteForce:
    def test_identity_is_optimal_for_equal_graphs(self):
        g = sample_er(6, 0.5, RngStream(4))
        value, optima = brute_force_gmp(g, g)
        assert value == 2 * g.edge_count
        assert PermutationMap.identity(6) in optima

    def test_complete_graph_every_permutation_optimal(self):
        k4 = Graph.complete(4)
        value, optima = brute_force_gmp(k4, k4)
        assert value == 12
        assert len(optima) == 24

    def test_matches_pairwise_oracle(self):
        for seed in range(5):
            a, b = sample_er(6, 0.5, RngStream(seed, 1)), sample_er(6, 0.5, RngStream(seed, 2))
            value, optima = brute_force_gmp(a, b)
            expected_value, expected_optima = _oracle(a, b)
            assert value == expected_value
            assert set(optima) == set(expected_optima)

    def test_seeds_fixed_in_every_optimum(self):
        a, b = sample_er(7, 0.5, RngStream(1)), sample_er(7, 0.5, RngStream(2))
        seeds = SeedSet([0, 3], 7)
        value, optima = brute_force_gmp(a, b, seeds)
        assert all(p(0) == 0 and p(3) == 3 for p in optima)
        assert value <= brute_force_gmp(a, b)[0]
        expected_value, expected_optima = _oracle(a, b, (0, 3))
        assert value == expected_value
        assert set(optima) == set(expected_optima)

    def test_too_many_free_vertices(self):
        with pytest.raises(InstanceTooLargeError):
            brute_force_gmp(Graph(10), Graph(10))
        # nine free vertices after seeding is allowed
        value, _ = brute_force_gmp(Graph(10), Graph(10), SeedSet([0], 10))
        assert value == 0

    def test_optima_closed_under_automorphisms_of_a(self):
        cycle = Graph.from_edge_list(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
        rotation = PermutationMap([1, 2, 3, 4, 0])
        b = sample_er(5, 0.5, RngStream(9))
        _, optima = brute_force_gmp(cycle, b)
        found = set(optima)
        for p in optima:
            assert p.compose(rotation) in found


class TestSgmFaq:
    def test_all_seeds_gives_identity(self):
        a, b = sample_er(10, 0.4, RngStream(1)), sample_er(10, 0.4, RngStream(2))
        result = MatcherFactory.create_matcher("faq").match(a, b, SeedSet.all(10))
        assert result.permutation.is_identity()
        assert result.correctness == 1.0

    def test_identical_graphs_from_identity_start(self):
        opts = SolverOptions(init=InitMethod.IDENTITY)
        for seed in range(50):
            g = sample_er(20, 0.3, RngStream(seed))
            result = sgm_faq(g, g, opts=opts)
            assert result.permutation.is_identity()
            assert result.objective == 2 * g.edge_count

    def test_objective_trace_nondecreasing(self):
        opts = SolverOptions(init=InitMethod.BARYCENTER)
        for seed in range(50):
            a = sample_er(15, 0.4, RngStream(seed, 1))
            b = sample_er(15, 0.4, RngStream(seed, 2))
            seeds = sample_seeds(15, 0.2, RngStream(seed, 3))
            result = sgm_faq(a, b, seeds, opts)
            trace = result.objective_trace
            assert len(trace) >= 2
            assert all(later >= earlier - 1e-9 for earlier, later in zip(trace, trace[1:]))
            assert result.objective == gmp_objective(a, b, result.permutation)

    def test_seeds_respected_with_restarts(self):
        a, b = sample_er(12, 0.5, RngStream(5)), sample_er(12, 0.5, RngStream(6))
        seeds = SeedSet([1, 4, 7], 12)
        matcher = MatcherFactory.create_matcher(
            "faq", SolverOptions(init=InitMethod.BARYCENTER, restarts=3), RngStream(7)
        )
        result = matcher.match(a, b, seeds)
        assert all(result.permutation(s) == s for s in (1, 4, 7))
        assert result.solver == "faq"

    def test_restarts_without_stream_are_fixed_and_logged(self, caplog):
        a, b = sample_er(10, 0.5, RngStream(3)), sample_er(10, 0.5, RngStream(4))
        opts = SolverOptions(init=InitMethod.BARYCENTER, restarts=3)
        with caplog.at_level(logging.DEBUG, logger="src.matching.sgm"):
            first = sgm_faq(a, b, opts=opts)
        assert "no RngStream given" in caplog.text
        assert sgm_faq(a, b, opts=opts).permutation == first.permutation
        caplog.clear()
        with caplog.at_level(logging.DEBUG, logger="src.matching.sgm"):
            sgm_faq(a, b, opts=opts, rng=RngStream(5))
        assert "no RngStream given" not in caplog.text

    def test_rogue_solver_caught(self):
        g = sample_er(5, 0.5, RngStream(1))
        with pytest.raises(SeedViolationError):
            _SeedMover().match(g, g, SeedSet([0], 5))

    def test_invalid_options(self):
        g = Graph(4)
        with pytest.raises(InvalidParameterError):
            sgm_faq(g, g, opts=SolverOptions(restarts=0))

    @pytest.mark.slow
    def test_reaches_exact_optimum_on_small_walks(self):
        opts = SolverOptions(init=InitMethod.BARYCENTER, restarts=5)
        root = RngStream(31)
        hits = 0
        for r in range(200):
            stream = root.derive("instance", r)
            g0 = sample_er(7, 0.5, stream.derive("graph"))
            final = run_walk(
                g0, WalkKind.STANDARD, StandardWalkParams(), 5, 5, None,
                stream.derive("walk"), keep_snapshots=False
            )[-1].graph
            best, _ = brute_force_gmp(g0, final)
            result = sgm_faq(g0, final, opts=opts, rng=stream.derive("faq"))
            hits += result.objective >= best
        assert hits >= 160


class TestCorrectness:
    def test_identity_and_derangement(self):
        assert match_correctness(PermutationMap.identity(6))[0] == 1.0
        shift = PermutationMap(np.roll(np.arange(6), 1))
        assert match_correctness(shift)[0] == 0.0

    def test_per_community(self):
        partition = Partition.from_sizes([2, 3, 3])
        image = np.arange(8)
        image[[2, 3]] = [3, 2]
        overall, per_community = match_correctness(PermutationMap(image), partition=partition)
        assert overall == pytest.approx(6 / 8)
        assert per_community.tolist() == pytest.approx([1.0, 1 / 3, 1.0])

    def test_seeds_excluded(self):
        partition = Partition.from_sizes([2, 3, 3])
        image = np.arange(8)
        image[[2, 3]] = [3, 2]
        overall, per_community = match_correctness(
            PermutationMap(image), SeedSet([0, 1], 8), partition
        )
        assert overall == pytest.approx(4 / 6)
        assert np.isnan(per_community[0])
        assert per_community[1] == pytest.approx(1 / 3)

    def test_no_free_vertices(self):
        assert match_correctness(PermutationMap.identity(3), SeedSet.all(3))[0] == 1.0


class TestSeedsAndFactory:
    def test_sample_seeds_count(self, rng):
        assert len(sample_seeds(100, 0.05, rng)) == 5
        assert len(sample_seeds(100, 0.0, rng)) == 0
        assert len(sample_seeds(40, 1.0, rng)) == 40
        with pytest.raises(InvalidParameterError):
            sample_seeds(10, 1.5, rng)

    def test_sample_seeds_reproducible(self):
        assert sample_seeds(50, 0.2, RngStream(3)).seeds.tolist() == sample_seeds(50, 0.2, RngStream(3)).seeds.tolist()

    def test_seed_set_free(self):
        seeds = SeedSet([4, 1, 1], 6)
        assert seeds.seeds.tolist() == [1, 4]
        assert seeds.free(6).tolist() == [0, 2, 3, 5]
        with pytest.raises(InvalidParameterError):
            SeedSet([7], 6)

    def test_exact_matcher_prefers_identity(self):
        k4 = Graph.complete(4)
        result = MatcherFactory.create_matcher("exact").match(k4, k4)
        assert result.permutation.is_identity()
        assert result.correctness == 1.0

    def test_unknown_matcher(self):
        with pytest.raises(InvalidParameterError):
            MatcherFactory.create_matcher("hungarian")
