"""
Tests for instance generation, filters and the instance/solution file formats
"""

import pytest

from bincompletion.exceptions import GenerationBudgetError, InstanceParseError, InstanceValidationError
from bincompletion.instances import (
    GenSpec,
    InstanceClass,
    format_instance,
    format_solution,
    gen_items,
    gen_mkp_capacities,
    generate_instance,
    instance_filename,
    is_degenerate_mkp,
    is_trivial_covering,
    make_rng,
    parse_instance,
    parse_solution,
    parse_solution_layout,
    read_instance,
    read_instance_metadata,
    read_solution,
    write_instance,
    write_solution,
)
from bincompletion.models import ProblemKind, SolveStatus
from bincompletion.solvers import solve
from oracles import make_instance


def mkp_spec(**overrides):
    values = dict(kind=ProblemKind.MKP, n=20, m=4, weight_range=(10, 1000), instance_class="uncorrelated", seed=3)
    values.update(overrides)
    return GenSpec(**values)


class TestGenSpec:
    def test_metadata(self):
        spec = mkp_spec(instance_class="subsetsum")
        assert spec.metadata() == {"class": "subsetsum", "n": "20", "m": "4", "range": "10-1000", "seed": "3"}
        assert spec.spread == 99

    @pytest.mark.parametrize(
        "overrides,field",
        [
            (dict(weight_range=(0, 10)), "weight_range"),
            (dict(weight_range=(20, 10)), "weight_range"),
            (dict(instance_class="triplet"), "instance_class"),
            (dict(kind=ProblemKind.BINPACKING), "capacity"),
            (dict(kind=ProblemKind.BINCOVERING), "quota"),
            (dict(kind=ProblemKind.BINPACKING, instance_class="triplet", n=10), "n"),
            (dict(kind=ProblemKind.BINPACKING, instance_class="triplet", n=9, capacity=900), "capacity"),
        ],
    )
    def test_rejects_bad_specs(self, overrides, field):
        with pytest.raises(InstanceValidationError) as exc:
            mkp_spec(**overrides)
        assert field in exc.value.field_errors

    def test_filename(self):
        assert instance_filename(mkp_spec()) == "mkp-uncorrelated-n20-m4-s3.inst"


class TestItemClasses:
    @pytest.mark.parametrize("cls", ["uncorrelated", "weakly", "strongly", "subsetsum"])
    def test_weights_in_range(self, cls):
        items = gen_items(mkp_spec(instance_class=cls, n=200))
        assert len(items) == 200
        assert all(10 <= it.weight <= 1000 for it in items)
        assert all(it.value >= 1 for it in items)

    def test_correlations(self):
        for it in gen_items(mkp_spec(instance_class="subsetsum", n=100)):
            assert it.value == it.weight
        for it in gen_items(mkp_spec(instance_class="strongly", n=100)):
            assert it.value == it.weight + 99
        for it in gen_items(mkp_spec(instance_class="weakly", n=100)):
            assert abs(it.value - it.weight) <= 99 or it.value == 1

    def test_uncorrelated_values_in_range(self):
        assert all(10 <= it.value <= 1000 for it in gen_items(mkp_spec(n=100)))

    def test_uniform_kinds_carry_no_value(self):
        spec = GenSpec(kind=ProblemKind.BINCOVERING, n=30, weight_range=(1, 50), quota=100, seed=1)
        assert all(it.value == 0 for it in gen_items(spec))

    def test_seed_reproducible(self):
        assert gen_items(mkp_spec(seed=11)) == gen_items(mkp_spec(seed=11))
        assert gen_items(mkp_spec(seed=11)) != gen_items(mkp_spec(seed=12))

    def test_triplets_fill_bins_exactly(self):
        spec = GenSpec(kind=ProblemKind.BINPACKING, n=9, instance_class="triplet", seed=5)
        items = gen_items(spec)
        for k in range(0, 9, 3):
            first, second, third = (it.weight for it in items[k:k + 3])
            assert first + second + third == 1000
            assert 380 <= first <= 490
            assert second >= 250 and third >= 250

    def test_triplet_optimum(self):
        spec = GenSpec(kind=ProblemKind.BINPACKING, n=12, instance_class="triplet", seed=2)
        instance = generate_instance(spec)
        assert instance.containers == (1000,)
        report = solve(instance)
        assert report.status is SolveStatus.OPTIMAL
        assert report.objective == 4


class TestFilters:
    def test_mkp_capacities_sum_to_half(self):
        spec = mkp_spec()
        rng = make_rng(spec.seed)
        items = gen_items(spec, rng)
        capacities = gen_mkp_capacities(spec, items, rng)
        total = sum(it.weight for it in items)
        assert len(capacities) == 4
        assert sum(capacities) == total // 2
        for c in capacities[:-1]:
            assert 4 * total // 40 <= c <= 6 * total // 40

    def test_generated_mkp_not_degenerate(self):
        for seed in range(10):
            instance = generate_instance(mkp_spec(seed=seed))
            assert not is_degenerate_mkp(instance)
            assert sum(instance.containers) == instance.total_weight // 2

    def test_degeneracy_rules(self):
        assert is_degenerate_mkp(make_instance(ProblemKind.MKP, [10, 10], [11, 2], [1, 1]))
        assert is_degenerate_mkp(make_instance(ProblemKind.MKP, [10, 1], [3, 2], [1, 1]))
        assert is_degenerate_mkp(make_instance(ProblemKind.MKP, [10, 30], [3, 2], [1, 1]))
        assert not is_degenerate_mkp(make_instance(ProblemKind.MKP, [7, 5], [3, 4, 5], [4, 5, 6]))

    def test_trivial_covering(self, covering_instance):
        assert is_trivial_covering(covering_instance)
        split = make_instance(ProblemKind.BINCOVERING, [100], [60, 55, 45, 40])
        assert not is_trivial_covering(split)

    def test_nontrivial_covering_filter(self):
        for seed in range(5):
            spec = GenSpec(kind=ProblemKind.BINCOVERING, n=12, weight_range=(10, 90), quota=100, seed=seed)
            assert not is_trivial_covering(generate_instance(spec, nontrivial=True))

    def test_budget_exhausted(self):
        spec = GenSpec(kind=ProblemKind.MKP, n=1, m=2, weight_range=(10, 10), seed=0)
        with pytest.raises(GenerationBudgetError) as exc:
            generate_instance(spec, budget=5)
        assert exc.value.attempts == 5
        assert exc.value.spec["n"] == 1

    def test_mccp_generation(self):
        spec = GenSpec(kind=ProblemKind.MCCP, n=15, m=3, weight_range=(10, 100), seed=4)
        instance = generate_instance(spec)
        assert instance.kind is ProblemKind.MCCP
        assert instance.m == 3
        assert sum(instance.containers) == instance.total_weight // 2


class TestInstanceFiles:
    def test_round_trip_with_metadata(self, tmp_path):
        spec = mkp_spec(n=8, m=2)
        instance = generate_instance(spec)
        path = write_instance(instance, tmp_path / instance_filename(spec), spec.metadata())
        assert read_instance(path) == instance
        assert read_instance_metadata(path)["class"] == "uncorrelated"

    def test_uniform_format(self, intro_instance):
        text = format_instance(intro_instance)
        assert text.splitlines()[:4] == ["kind binpacking", "containers 100", "items 6", "6"]
        assert parse_instance(text) == intro_instance

    def test_comments_ignored(self):
        text = "# class hand\nkind mkp\ncontainers 7 5  # two bins\nitems 1\n3 4\n"
        instance = parse_instance(text)
        assert instance.containers == (7, 5)
        assert instance.items[0].key == (3, 4)

    @pytest.mark.parametrize(
        "text,field,line",
        [
            ("kind knapsack\ncontainers 5\nitems 0\n", "kind", 1),
            ("kind mkp\ncontainers 5 x\nitems 0\n", "containers", 2),
            ("kind mkp\ncontainers 5\nitems 2\n3 4\n", "items", 4),
            ("kind mkp\ncontainers 5\nitems 1\n0 4\n", "item", 4),
            ("kind mkp\ncontainers 5\nitems 1\n3 4 5\n", "item", 4),
            ("kind mkp\nitems 1\n3 4\n", "containers", 2),
        ],
    )
    def test_parse_errors(self, text, field, line):
        with pytest.raises(InstanceParseError) as exc:
            parse_instance(text)
        assert exc.value.field_name == field
        assert exc.value.line_number == line
        assert str(exc.value).startswith(f"INSTANCE_PARSE_ERROR: line {line}")

    def test_invalid_instance_becomes_parse_error(self):
        with pytest.raises(InstanceParseError) as exc:
            parse_instance("kind binpacking\ncontainers 5 6\nitems 1\n3\n")
        assert exc.value.field_name == "instance"

    def test_missing_section(self):
        with pytest.raises(InstanceParseError) as exc:
            parse_instance("kind mkp\ncontainers 5\n")
        assert exc.value.field_name == "items"


class TestSolutionFiles:
    def test_round_trip(self, tmp_path, covering_instance):
        report = solve(covering_instance)
        path = write_solution(report.solution, tmp_path / "cover.sol")
        assert read_solution(path, covering_instance) == report.solution

    def test_format(self, mkp_instance):
        solution = solve(mkp_instance).solution
        lines = format_solution(solution).splitlines()
        assert lines[0] == "bins 2"
        assert lines[-2] == "overflow"
        assert lines[-1] == "objective 15"

    def test_objective_recomputed(self, intro_instance):
        solution = parse_solution("bins 2\n0 1 5\n2 3 4\noverflow\n", intro_instance)
        assert solution.objective == 2

    def test_empty_bin_marker(self, mkp_instance):
        solution = parse_solution("bins 2\n0 1\n-\n", mkp_instance)
        assert len(solution.assignments[1]) == 0
        assert solution.objective == 9

    def test_unknown_item(self, intro_instance):
        with pytest.raises(InstanceParseError) as exc:
            parse_solution("bins 1\n0 9\n", intro_instance)
        assert exc.value.line_number == 2

    def test_repeated_item_in_bin(self, intro_instance):
        with pytest.raises(InstanceParseError):
            parse_solution("bins 1\n0 0\n", intro_instance)

    def test_layout_keeps_repeats(self, intro_instance):
        layout = parse_solution_layout("bins 2\n0 0 1\n-\noverflow 5\nobjective 2\n", intro_instance)
        assert layout.bins == ((0, 0, 1), ())
        assert layout.overflow == (5,)
        assert layout.objective == 2

    def test_layout_rejects_unknown_item(self, intro_instance):
        with pytest.raises(InstanceParseError) as exc:
            parse_solution_layout("bins 1\n0 9\n", intro_instance)
        assert exc.value.line_number == 2
