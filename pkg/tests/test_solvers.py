"""
Tests for the bin-completion solvers, the item-oriented baseline and the oracle
"""

import statistics

import pytest

from bincompletion.core import validate_solution
from bincompletion.exceptions import KindMismatchError, OracleLimitError
from bincompletion.instances import GenSpec, generate_instance, is_trivial_covering
from bincompletion.models import DominanceKind, ProblemKind, PruningPolicy, SolverConfig, SolveStatus
from bincompletion.solvers import (
    BIN_COMPLETION,
    BinPackingSearch,
    ExhaustiveSearch,
    ItemOrientedSearch,
    solve,
)
from oracles import brute_optimum, make_instance, random_instance

POLICIES = [PruningPolicy.NONE, PruningPolicy.NP, PruningPolicy.NDP]
ORDERINGS = [None, "generation-order"]


def random_shape(rng, kind, max_n):
    n = int(rng.integers(3, max_n, endpoint=True))
    m = 1 if kind.is_uniform else int(rng.integers(1, 3, endpoint=True))
    return n, m


def check_report(instance, report):
    if report.solution is not None:
        verdict = validate_solution(instance, report.solution)
        assert verdict.valid, verdict.codes()
        assert verdict.recomputed_objective == report.objective


class TestGoldens:
    def test_intro_closed_at_root(self, intro_instance):
        report = solve(intro_instance)
        assert report.status is SolveStatus.OPTIMAL
        assert report.objective == 2
        assert report.nodes == 1
        check_report(intro_instance, report)

    def test_seven_items(self, seven_item_instance):
        report = solve(seven_item_instance)
        assert report.objective == 3
        check_report(seven_item_instance, report)

    @pytest.mark.parametrize("pruning", POLICIES)
    def test_nogood_instance_matches_oracle(self, nogood_instance, pruning):
        report = solve(nogood_instance, SolverConfig(pruning=pruning))
        assert report.objective == solve(nogood_instance, solver="oracle").objective == 3

    def test_bfd_gap_needs_search(self):
        instance = make_instance(ProblemKind.BINPACKING, [100], [49, 49, 34, 34, 34])
        report = solve(instance)
        assert report.objective == 3
        assert report.nodes > 1

    def test_mkp(self, mkp_instance):
        report = solve(mkp_instance)
        assert report.objective == 15
        check_report(mkp_instance, report)

    def test_covering(self, covering_instance):
        report = solve(covering_instance)
        assert report.objective == 1
        check_report(covering_instance, report)
        pairs = make_instance(ProblemKind.BINCOVERING, [100], [60, 50, 60, 50])
        assert solve(pairs).objective == 2

    def test_mccp(self, mccp_instance):
        report = solve(mccp_instance)
        assert report.objective == 14
        check_report(mccp_instance, report)

    def test_mccp_single_item(self):
        instance = make_instance(ProblemKind.MCCP, [5], [6], [9])
        assert solve(instance).objective == 9

    def test_mccp_infeasible(self):
        instance = make_instance(ProblemKind.MCCP, [5, 5], [6], [9])
        for solver in ("bc", "item", "oracle"):
            report = solve(instance, solver=solver)
            assert report.status is SolveStatus.INFEASIBLE
            assert report.solution is None

    def test_item_larger_than_capacity(self):
        instance = make_instance(ProblemKind.BINPACKING, [100], [120, 5])
        for solver in ("bc", "item", "oracle"):
            report = solve(instance, solver=solver)
            assert report.status is SolveStatus.INFEASIBLE
            assert report.objective is None


class TestLimitsAndErrors:
    def test_node_limit(self):
        instance = make_instance(ProblemKind.BINPACKING, [100], [49, 49, 34, 34, 34])
        report = solve(instance, SolverConfig(node_limit=1))
        assert report.status is SolveStatus.NODE_LIMIT
        assert report.nodes == 1
        # the heuristic incumbent survives the interruption
        assert report.objective == 3

    def test_time_limit(self):
        instance = make_instance(ProblemKind.BINPACKING, [100], [49, 49, 34, 34, 34])
        report = solve(instance, SolverConfig(time_limit=1e-9))
        assert report.status is SolveStatus.TIME_LIMIT
        assert not report.is_optimal

    def test_oracle_refuses_large_instances(self):
        instance = make_instance(ProblemKind.BINPACKING, [100], [10] * 17)
        with pytest.raises(OracleLimitError) as exc:
            solve(instance, solver="oracle")
        assert exc.value.details["limit"] == 16

    def test_kind_mismatch(self, covering_instance):
        with pytest.raises(KindMismatchError):
            BinPackingSearch(covering_instance)

    def test_unknown_solver(self, intro_instance):
        with pytest.raises(ValueError):
            solve(intro_instance, solver="simplex")


class TestItemOrientedBaseline:
    def test_first_level_two_branches(self, seven_item_instance):
        search = ItemOrientedSearch(seven_item_instance)
        search.initial_incumbent = lambda: None
        seen = {}
        search.on_generate = lambda depth, layouts: seen.setdefault(depth, layouts)
        report = search.run()
        assert report.objective == 3
        assert seen[2][:2] == [((83,), (42, 41)), ((83,), (42,), (41,))]

    @pytest.mark.parametrize("kind", list(ProblemKind))
    def test_goldens(self, kind, intro_instance, covering_instance, mkp_instance, mccp_instance):
        instance, expected = {
            ProblemKind.BINPACKING: (intro_instance, 2),
            ProblemKind.BINCOVERING: (covering_instance, 1),
            ProblemKind.MKP: (mkp_instance, 15),
            ProblemKind.MCCP: (mccp_instance, 14),
        }[kind]
        report = solve(instance, solver="item")
        assert report.objective == expected
        check_report(instance, report)


class TestOracle:
    @pytest.mark.parametrize("kind", list(ProblemKind))
    def test_matches_brute_force(self, rng, kind):
        for _ in range(8):
            n, m = random_shape(rng, kind, 5)
            instance = random_instance(rng, kind, n=n, m=m)
            report = ExhaustiveSearch(instance).run()
            assert report.objective == brute_optimum(instance)
            check_report(instance, report)


class TestOracleEquivalence:
    @pytest.mark.parametrize("kind", list(ProblemKind))
    def test_all_solvers_agree(self, rng, kind):
        for _ in range(12):
            n, m = random_shape(rng, kind, 8)
            instance = random_instance(rng, kind, n=n, m=m)
            expected = solve(instance, solver="oracle").objective
            item = solve(instance, solver="item")
            assert item.objective == expected
            check_report(instance, item)
            for pruning in POLICIES:
                report = solve(instance, SolverConfig(pruning=pruning))
                assert report.objective == expected, (instance, pruning)
                check_report(instance, report)

    @pytest.mark.parametrize("ordering", ORDERINGS)
    @pytest.mark.parametrize("kind", list(ProblemKind))
    def test_pruning_never_adds_nodes(self, rng, kind, ordering):
        for _ in range(12):
            n, m = random_shape(rng, kind, 9)
            instance = random_instance(rng, kind, n=n, m=m)
            nodes = [
                solve(instance, SolverConfig(pruning=p, value_ordering=ordering, rng_seed=11)).nodes
                for p in POLICIES
            ]
            assert nodes[0] >= nodes[1] >= nodes[2]

    def test_cmt_dominance_variant(self, rng):
        for _ in range(10):
            n, m = random_shape(rng, ProblemKind.BINPACKING, 8)
            instance = random_instance(rng, ProblemKind.BINPACKING, n=n, m=m)
            expected = solve(instance, solver="oracle").objective
            config = SolverConfig(dominance=DominanceKind.CMT_PACKING)
            assert solve(instance, config).objective == expected

    def test_depth_limited_ndp(self, rng):
        for kind in ProblemKind:
            n, m = random_shape(rng, kind, 8)
            instance = random_instance(rng, kind, n=n, m=m)
            expected = solve(instance, solver="oracle").objective
            assert solve(instance, SolverConfig(ndp_depth_limit=1)).objective == expected

    @pytest.mark.slow
    @pytest.mark.parametrize("kind", list(ProblemKind))
    def test_full_suite(self, rng, kind):
        for _ in range(200):
            n = int(rng.integers(4, 12, endpoint=True))
            m = 1 if kind.is_uniform else int(rng.integers(1, 4, endpoint=True))
            instance = random_instance(rng, kind, n=n, m=m)
            expected = solve(instance, solver="oracle").objective
            assert solve(instance, solver="item").objective == expected
            for pruning in POLICIES:
                assert solve(instance, SolverConfig(pruning=pruning)).objective == expected, (instance, pruning)
            nodes = []
            for pruning in POLICIES:
                config = SolverConfig(pruning=pruning, value_ordering="generation-order", rng_seed=11)
                report = solve(instance, config)
                assert report.objective == expected, (instance, pruning)
                nodes.append(report.nodes)
            assert nodes[0] >= nodes[1] >= nodes[2], instance


class TestDeterminism:
    @pytest.mark.parametrize("kind", list(ProblemKind))
    def test_repeat_runs_identical(self, rng, kind):
        n, m = random_shape(rng, kind, 8)
        instance = random_instance(rng, kind, n=n, m=m)
        first = solve(instance, SolverConfig(rng_seed=7))
        second = solve(instance, SolverConfig(rng_seed=7))
        assert first.solution == second.solution
        assert first.nodes == second.nodes
        assert first.incumbent_trace == second.incumbent_trace

    def test_report_record(self, intro_instance):
        record = solve(intro_instance).to_record()
        assert record["objective"] == 2
        assert record["status"] == "optimal"
        assert record["solver"] == "bc-binpacking"
        assert record["pruning"] == "ndp"


class TestSearchDepth:
    @pytest.mark.parametrize("pruning", POLICIES)
    @pytest.mark.parametrize("kind", list(ProblemKind))
    def test_nogood_stack_never_outgrows_the_path(self, rng, kind, pruning):
        for _ in range(10):
            n, m = random_shape(rng, kind, 9)
            instance = random_instance(rng, kind, n=n, m=m)
            search = BIN_COMPLETION[kind](instance, SolverConfig(pruning=pruning))
            search.run()
            assert search.max_stack_depth <= search.max_depth <= max(instance.n, instance.m)

    def test_depth_recorded_below_root(self):
        instance = make_instance(ProblemKind.BINPACKING, [100], [49, 49, 34, 34, 34])
        search = BinPackingSearch(instance)
        report = search.run()
        assert report.nodes > 1
        assert 0 < search.max_stack_depth <= search.max_depth


@pytest.mark.slow
class TestDeskScale:
    def test_subset_sum_mkp(self):
        bc_nodes, item_nodes = [], []
        for seed in range(30):
            spec = GenSpec(
                kind=ProblemKind.MKP, n=20, m=10, weight_range=(10, 1000),
                instance_class="subsetsum", seed=seed,
            )
            instance = generate_instance(spec)
            report = solve(instance, SolverConfig(time_limit=5))
            assert report.status is SolveStatus.OPTIMAL
            assert report.nodes <= 10_000
            bc_nodes.append(report.nodes)
            baseline = solve(instance, SolverConfig(time_limit=60), solver="item")
            assert baseline.objective == report.objective
            item_nodes.append(baseline.nodes)
        # the baseline runs a knapsack bound at every node; measured gap is about 6x
        assert statistics.median(item_nodes) >= 5 * statistics.median(bc_nodes)

    def test_trivial_covering_closes_at_root(self):
        trivial = 0
        for seed in range(40):
            spec = GenSpec(kind=ProblemKind.BINCOVERING, n=40, weight_range=(1, 100), quota=200, seed=seed)
            instance = generate_instance(spec)
            if is_trivial_covering(instance):
                trivial += 1
                assert solve(instance).nodes == 1
        assert trivial > 0

    def test_trivial_covering_full_scale(self):
        for seed in range(1000):
            spec = GenSpec(
                kind=ProblemKind.BINCOVERING, n=120, weight_range=(1, 99999), quota=100000, seed=seed,
            )
            instance = generate_instance(spec)
            if is_trivial_covering(instance):
                report = solve(instance)
                assert report.status is SolveStatus.OPTIMAL
                assert report.nodes == 1

    def test_batch_width_does_not_change_optimum(self):
        for seed in range(5):
            spec = GenSpec(
                kind=ProblemKind.BINCOVERING, n=16, weight_range=(1000, 9999), quota=20000, seed=seed,
            )
            instance = generate_instance(spec)
            objectives = {
                solve(instance, SolverConfig(h=h)).objective
                for h in (1, 10, 100, "unbounded")
            }
            assert len(objectives) == 1
