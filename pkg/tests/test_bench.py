"""
Tests for benchmark aggregation and runs
"""

import math

import pandas as pd
import pytest

import bincompletion.bench as bench_module
from bincompletion.bench import (
    CSV_COLUMNS,
    aggregate,
    bench_rows,
    list_instances,
    parse_solver_choice,
    run_bench,
    write_csv,
)
from bincompletion.exceptions import BenchError
from bincompletion.instances import GenSpec, generate_instance, instance_filename, write_instance
from bincompletion.models import ProblemKind, PruningPolicy, SolverConfig


def run_record(status, elapsed, nodes, solver="bc", pruning="ndp"):
    return {
        "instance": "x.inst", "class": "subsetsum", "kind": "mkp", "n": 20, "m": 10,
        "solver": solver, "pruning": pruning, "status": status, "objective": 1,
        "nodes": nodes, "elapsed": elapsed,
    }


@pytest.fixture
def suite(tmp_path):
    for seed in range(3):
        spec = GenSpec(kind=ProblemKind.MKP, n=8, m=2, weight_range=(10, 100), seed=seed)
        write_instance(generate_instance(spec), tmp_path / instance_filename(spec), spec.metadata())
    return tmp_path


class TestSolverChoice:
    @pytest.mark.parametrize(
        "token,expected",
        [
            ("bc:ndp", ("bc", PruningPolicy.NDP)),
            ("bc:NP", ("bc", PruningPolicy.NP)),
            ("bc", ("bc", PruningPolicy.NDP)),
            ("item", ("item", None)),
        ],
    )
    def test_parse(self, token, expected):
        assert parse_solver_choice(token) == expected

    @pytest.mark.parametrize("token", ["cplex", "bc:aggressive"])
    def test_unknown(self, token):
        with pytest.raises(ValueError):
            parse_solver_choice(token)


class TestAggregate:
    def test_failures_excluded_from_means(self):
        runs = pd.DataFrame([
            run_record("optimal", 1.0, 10),
            run_record("optimal", 3.0, 30),
            run_record("time-limit", 300.0, 99999),
            run_record("infeasible", 2.0, 20),
        ])
        table = aggregate(runs)
        assert list(table.columns) == CSV_COLUMNS
        row = table.iloc[0]
        assert row["fail"] == 1
        assert row["meanTime"] == pytest.approx(2.0)
        assert row["meanNodes"] == pytest.approx(20.0)

    def test_all_failed_group(self):
        runs = pd.DataFrame([
            run_record("optimal", 1.0, 10),
            run_record("node-limit", 5.0, 100, solver="item", pruning="-"),
        ])
        rows = {row.solver: row for row in bench_rows(aggregate(runs))}
        assert rows["bc"].fail == 0
        assert rows["item"].fail == 1
        assert rows["item"].mean_time is None
        assert rows["item"].mean_nodes is None
        assert rows["bc"].instance_class == "subsetsum"

    def test_everything_failed(self):
        runs = pd.DataFrame([run_record("time-limit", 300.0, 5)])
        table = aggregate(runs)
        assert table.iloc[0]["fail"] == 1
        assert math.isnan(table.iloc[0]["meanTime"])

    def test_csv_columns(self, tmp_path):
        table = aggregate(pd.DataFrame([run_record("optimal", 0.5, 4)]))
        path = write_csv(table, tmp_path / "out.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "class,kind,n,m,solver,pruning,fail,meanTime,meanNodes"
        assert lines[1] == "subsetsum,mkp,20,10,bc,ndp,0,0.500000,4.000000"


class TestRunBench:
    def test_serial_runs(self, suite):
        runs = run_bench(suite, [("bc", PruningPolicy.NDP), ("item", None)], time_limit=30)
        assert len(runs) == 6
        assert set(runs["status"]) == {"optimal"}
        assert set(runs["class"]) == {"uncorrelated"}
        by_instance = runs.groupby("instance")["objective"].nunique()
        assert (by_instance == 1).all()

    def test_parallel_matches_serial(self, suite):
        choices = [("bc", PruningPolicy.NP)]
        serial = run_bench(suite, choices, time_limit=30)
        parallel = run_bench(suite, choices, time_limit=30, workers=2)
        assert list(serial["objective"]) == list(parallel["objective"])
        assert list(serial["nodes"]) == list(parallel["nodes"])

    def test_config_reaches_every_run(self, suite, monkeypatch):
        seen = []
        real_solve = bench_module.solve

        def recording(instance, config=None, solver="bc"):
            seen.append((solver, config))
            return real_solve(instance, config, solver=solver)

        monkeypatch.setattr(bench_module, "solve", recording)
        config = SolverConfig(covering_h=7, ndp_depth_limit=2, value_ordering="generation-order")
        run_bench(suite, [("bc", PruningPolicy.NDP), ("item", None)], time_limit=30, node_limit=50_000, config=config)
        assert len(seen) == 6
        for solver, used in seen:
            assert used.covering_h == 7
            assert used.ndp_depth_limit == 2
            assert used.value_ordering == "generation-order"
            assert used.time_limit == 30
            assert used.node_limit == 50_000
            assert used.pruning is (PruningPolicy.NDP if solver == "bc" else PruningPolicy.NONE)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(BenchError) as exc:
            list_instances(tmp_path / "nowhere")
        assert exc.value.details["instance_dir"].endswith("nowhere")
