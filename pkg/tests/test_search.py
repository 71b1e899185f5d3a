"""Tests for the value search."""

import itertools

import pytest

from tensorsynth.exceptions import OpError, SearchExhausted, SearchTimeout
from tensorsynth.search import (
    Outcome,
    SearchStats,
    ValueSearch,
    collect_initial_values,
    compositions,
    evaluate_expression,
    evaluate_on_examples,
    evaluate_text,
    harvest,
    search,
    try_cast_match,
)
from tensorsynth.search.engine import TIMEOUT_CHECK_INTERVAL
from tensorsynth.search.explored import ExploredSet, SuperValue, weight_compositions
from tensorsynth.search.task import SearchConfig
from tensorsynth.values import DType, Kind, Origin, RenderStyle, Value, equal_output

from .factories import make_task, multi_example_task, tensor

ROW_SUMS = {"inputs": {"in1": [[1, 2], [3, 4]]}, "output": [3, 7]}


def fake_clock(step):
    """A clock advancing ``step`` seconds per reading."""
    counter = itertools.count(step=step)
    return lambda: next(counter)


class TestCompositions:
    """Splitting a weight among arguments."""

    def test_two_parts(self):
        assert compositions(5, 2) == [(1, 4), (2, 3), (3, 2), (4, 1)]

    def test_edge_cases(self):
        assert compositions(3, 3) == [(1, 1, 1)]
        assert compositions(2, 3) == []
        assert compositions(4, 1) == [(4,)]

    def test_restricted_parts(self):
        """Only weights that hold values are tried."""
        assert list(weight_compositions(16, 2, [7, 8, 9])) == [(7, 9), (8, 8), (9, 7)]


class TestInitialValues:
    """Leaves every expression starts from."""

    def test_weights_by_origin(self):
        task = make_task({"in1": [[1, 2], [3, 4]]}, [3, 7], constants=[7])
        explored = collect_initial_values(task)
        assert explored.weights() == [7, 8, 12]
        by_weight = {w: [v.first for v in explored.by_weight[w]] for w in explored.weights()}
        assert [v.payload for v in by_weight[7]] == [7]
        assert by_weight[8][0].name == "in1"
        ints = [v.payload for v in by_weight[8] if v.kind is Kind.INT]
        assert ints == [0, 1, -1]
        assert sum(1 for v in by_weight[8] if v.kind is Kind.DTYPE) == 4
        assert [v.kind for v in by_weight[12]] == [Kind.INT, Kind.TUPLE]
        assert len(explored) == 13

    def test_lowest_weight_wins(self):
        """A user constant equal to a common constant keeps the constant weight."""
        task = make_task({"in1": [5, 6]}, [6, 7], constants=[1])
        explored = collect_initial_values(task)
        ones = [v for v in explored if v.first.kind is Kind.INT and v.first.payload == 1]
        assert len(ones) == 1
        assert ones[0].weight == 7

    def test_duplicate_inputs_collapse(self):
        """Two inputs with the same value are stored once, under the first name."""
        task = make_task({"in1": [1, 2], "in2": [1, 2]}, [2, 4])
        explored = collect_initial_values(task)
        names = [v.first.name for v in explored if v.first.name]
        assert names == ["in1"]

    def test_multiple_examples(self):
        task = multi_example_task([({"in1": [1, 2]}, [2, 4]), ({"in1": [5]}, [10])])
        explored = collect_initial_values(task)
        inputs = [v for v in explored if v.first.name == "in1"]
        assert len(inputs[0]) == 2
        dims = [v.first.payload for v in explored if v.weight == 12 and v.first.kind is Kind.INT]
        # 1 is already a common constant
        assert dims == [2]


class TestExploredSet:
    """Deduplicating store."""

    def test_dedup_keeps_first(self):
        explored = ExploredSet()
        first = SuperValue([tensor([1, 2]).as_leaf(Origin.heuristic("axis"), 8)])
        assert explored.add(first)
        assert not explored.add(SuperValue([tensor([1, 2])]))
        assert explored.representative(SuperValue([tensor([1, 2])])) is first
        assert len(explored) == 1

    def test_filter_cache_extends(self, registry):
        """Values added after a filter was cached still show up."""
        explored = ExploredSet()
        vector = registry.get("where_1").arg_filters[0]
        explored.add(SuperValue([tensor([True]).as_leaf(Origin.heuristic("axis"), 8)]))
        assert len(explored.filtered_values(vector, 8)) == 1
        explored.add(SuperValue([tensor([False, True]).as_leaf(Origin.heuristic("axis"), 8)]))
        explored.add(SuperValue([Value.of_int(3).as_leaf(Origin.heuristic("axis"), 8)]))
        assert len(explored.filtered_values(vector, 8)) == 2
        assert explored.count(8) == 3

    def test_disabled_filters_admit_everything(self, registry):
        explored = ExploredSet(disable_filters=True)
        explored.add(SuperValue([Value.of_int(3, weight=8)]))
        assert len(explored.filtered_values(registry.get("where_1").arg_filters[0], 8)) == 1


class TestValueSearch:
    """End to end searches on small tasks."""

    def test_finds_row_sums(self, registry):
        """The cheapest program comes first."""
        task = make_task(**ROW_SUMS)
        value_search = ValueSearch(task, registry)
        solutions = value_search.run()
        assert value_search.outcome == Outcome.SOLVED
        assert len(solutions) == 1
        assert solutions[0].pythonic == "tf.reduce_sum(in1, axis=1)"
        assert solutions[0].functional == "reduce_sum_axis(in1, 1)"
        assert solutions[0].weight == 18 + 8 + 8

    def test_solutions_in_weight_order(self, registry):
        """Several solutions come with non-decreasing weights and distinct text."""
        task = make_task(**ROW_SUMS, max_solutions=2)
        solutions = ValueSearch(task, registry).run()
        assert [s.functional for s in solutions] == ["reduce_sum_axis(in1, 1)", "reduce_sum_axis(in1, -1)"]
        weights = [s.weight for s in solutions]
        assert weights == sorted(weights)

    def test_opportunistic_cast(self, registry):
        """A value matching the output up to dtype is reported with a cast."""
        task = make_task({"in1": [[1.0, 2.0], [3.0, 4.0]]}, [3, 7])
        (solution,) = ValueSearch(task, registry).run()
        assert solution.pythonic == "tf.cast(tf.reduce_sum(in1, axis=1), tf.int32)"
        assert solution.weight == 14 + 18 + 8 + 8 + 8

    def test_cast_waits_for_cheaper_programs(self, registry):
        """A cast solution never comes before a cheaper program found later."""
        subset = registry.subset(["divide", "reduce_sum_axis", "cast"])
        firsts = []
        for max_solutions in (1, 3):
            task = make_task({"in1": [[1, 2], [3, 4]]}, [3.0, 7.0], constants=[1], max_solutions=max_solutions)
            solutions = ValueSearch(task, subset).run()
            assert [s.weight for s in solutions] == sorted(s.weight for s in solutions)
            firsts.append(solutions[0])
        assert firsts[0].functional == firsts[1].functional
        assert firsts[0].weight == 54
        assert not firsts[0].functional.startswith("cast(")

    def test_requires_every_input(self, registry):
        task = make_task({"in1": [1, 2], "in2": [3, 4]}, [1, 2])
        (solution,) = ValueSearch(task, registry).run()
        assert solution.functional == "minimum(in1, in2)"

    def test_input_alone_when_allowed(self, registry):
        task = make_task({"in1": [1, 2], "in2": [3, 4]}, [1, 2], require_all_inputs=False)
        (solution,) = ValueSearch(task, registry).run()
        assert solution.functional == "in1"
        assert solution.weight == 8

    def test_multiple_examples(self, registry):
        """A solution must hold on every example."""
        task = multi_example_task(
            [({"in1": [[1, 2], [3, 4]]}, [3, 7]), ({"in1": [[5, 1, 1]]}, [7])],
        )
        (solution,) = ValueSearch(task, registry).run()
        assert solution.functional == "reduce_sum_axis(in1, 1)"
        assert len(solution.values) == 2

    def test_registry_subset(self, registry):
        task = make_task({"in1": [45, 58, 72, 33, 45, 58, 58, 33]}, [0, 1, 2, 3, 0, 1, 1, 3])
        subset = registry.subset(["add", "cast", "unique_with_counts_index"])
        (solution,) = ValueSearch(task, subset).run()
        assert solution.pythonic == "tf.unique_with_counts(in1)[1]"
        assert solution.weight == 36 + 8

    def test_reweighting_changes_the_answer(self, registry, weights):
        """Cheaper operations are preferred among equally valid programs."""
        task = make_task(**ROW_SUMS, max_weight=100)
        favoured = weights.updated({"reduce_sum_axis": 60, "tensordot": 1})
        subset = registry.subset(["reduce_sum_axis", "tensordot", "ones_like", "indexing"])
        solutions = ValueSearch(task, subset, favoured).run()
        assert "reduce_sum_axis" not in solutions[0].functional

    def test_equal_weights(self, registry):
        task = make_task(**ROW_SUMS, equal_weights=True, max_weight=10)
        (solution,) = ValueSearch(task, registry).run()
        assert solution.weight == 3

    def test_stats_funnel(self, registry):
        """Filter counters shrink from stage to stage."""
        value_search = ValueSearch(make_task(**ROW_SUMS), registry)
        value_search.run()
        stats = value_search.stats
        assert stats.candidates_before_arg_filters >= stats.after_arg_filters
        assert stats.after_arg_filters >= stats.after_combination_filters
        assert stats.after_combination_filters >= stats.executions
        assert stats.executions >= stats.exec_errors
        assert stats.dedup_hits > 0
        assert stats.values_explored == len(value_search.explored)
        assert 0 < stats.arg_filter_elimination < 1

    def test_disabled_filters_execute_more(self, registry):
        filtered = ValueSearch(make_task(**ROW_SUMS), registry)
        filtered.run()
        unfiltered = ValueSearch(make_task(**ROW_SUMS, disable_filters=True), registry)
        assert unfiltered.run()
        assert unfiltered.outcome == Outcome.SOLVED
        assert unfiltered.stats.executions > filtered.stats.executions
        assert unfiltered.stats.exec_errors > filtered.stats.exec_errors

    def test_deterministic(self, registry):
        """Two runs agree on solutions and counters."""
        runs = []
        for _ in range(2):
            value_search = ValueSearch(make_task(**ROW_SUMS, max_solutions=2), registry)
            runs.append(([s.functional for s in value_search.run()], value_search.stats.as_dict(timing=False)))
        assert runs[0] == runs[1]
        assert "elapsed" not in runs[0][1]

    def test_exhausted(self, registry):
        task = make_task({"in1": [1, 2]}, [100, 200], max_weight=60)
        value_search = ValueSearch(task, registry.subset(["add"]))
        assert value_search.run() == []
        assert value_search.outcome == Outcome.EXHAUSTED
        assert value_search.stats.max_weight_reached <= 60
        with pytest.raises(SearchExhausted):
            list(search(task, registry.subset(["add"])))

    def test_timeout(self, registry):
        """The search stops once the clock passes the budget."""
        task = make_task({"in1": [1, 2]}, [100, 200], timeout=10.0)
        value_search = ValueSearch(task, registry, clock=fake_clock(1000))
        assert value_search.run() == []
        assert value_search.outcome == Outcome.TIMEOUT
        assert value_search.stats.elapsed > 10.0

    def test_timeout_while_filters_reject(self, registry, mocker):
        """Argument lists rejected before execution still advance the clock checks."""
        rejected = mocker.patch("tensorsynth.search.engine.combination_passes", return_value=False)
        readings = itertools.chain([0.0] * 4, itertools.repeat(100.0))
        task = make_task(
            {"in1": [1, 2]}, [100, 200], constants=list(range(2, 60)), equal_weights=True, timeout=10.0
        )
        value_search = ValueSearch(task, registry.subset(["add"]), clock=lambda: next(readings))
        assert value_search.run() == []
        assert value_search.outcome == Outcome.TIMEOUT
        assert value_search.stats.executions == 0
        assert rejected.call_count < TIMEOUT_CHECK_INTERVAL

    def test_search_raises_timeout(self, registry):
        task = make_task({"in1": [1, 2]}, [100, 200], timeout=1e-6)
        with pytest.raises(SearchTimeout):
            list(search(task, registry))

    def test_search_yields(self, registry):
        (solution,) = list(search(make_task(**ROW_SUMS), registry))
        assert solution.rendered(RenderStyle.FUNCTIONAL) == "reduce_sum_axis(in1, 1)"
        assert solution.stats.executions > 0


def test_stats_elimination():
    stats = SearchStats(candidates_before_arg_filters=100, after_arg_filters=25, after_combination_filters=5)
    assert stats.arg_filter_elimination == pytest.approx(0.75)
    assert stats.combination_filter_elimination == pytest.approx(0.8)
    assert SearchStats().arg_filter_elimination == 0.0


def test_try_cast_match(registry):
    int32 = Value.of_dtype(DType.I32, weight=8)
    cast = registry.get("cast")
    target = tensor([1, 2])
    matched = try_cast_match(tensor([1.0, 2.0]), target, SearchConfig().tolerance, cast, int32, 14)
    assert matched is not None and equal_output(matched, target)
    assert try_cast_match(tensor([0.5, 2.0]), target, SearchConfig().tolerance, cast, int32) is None
    assert try_cast_match(tensor([1, 2]), target, SearchConfig().tolerance, cast, int32) is None
    assert try_cast_match(tensor([1.0]), target, SearchConfig().tolerance, cast, int32) is None


def test_harvest_stops_at_budget(registry):
    task = make_task({"in1": [[1, 2], [3, 4]]}, [0])
    explored = harvest(task, registry, max_values=200)
    assert len(explored) == 200


class TestEvaluate:
    """Re-running expressions and reading program text."""

    def test_segment_lengths_program(self, registry):
        inputs = {"in1": tensor([3, 4, 1])}
        value = evaluate_text("cast(indexing_axis1(where_1(sequence_mask(in1)), 0), int32)", inputs, registry)
        assert equal_output(value, tensor([0, 0, 0, 1, 1, 1, 1, 2]))

    def test_literals(self, registry):
        inputs = {"in1": tensor([[1, 2], [3, 4]])}
        value = evaluate_text('add(reshape(in1, (4,)), {"dtype": "i32", "data": [1, 1, 1, 1]})', inputs, registry)
        assert equal_output(value, tensor([2, 3, 4, 5]))
        value = evaluate_text("reduce_sum_axis(in1, -1)", inputs, registry)
        assert equal_output(value, tensor([3, 7]))

    def test_weights_are_recorded(self, registry, weights):
        inputs = {"in1": tensor([1, 2]).as_leaf(Origin.heuristic("axis"), 8)}
        value = evaluate_text("add(in1, in1)", inputs, registry, weights.updated({"add": 3}))
        assert value.history.op_weight == 3

    @pytest.mark.parametrize("text", ["in1 + in1", "add(in1, x=in1)", "nope(in1)", "add(in1, in9)", "add(", "'a'"])
    def test_invalid_programs(self, registry, text):
        with pytest.raises((ValueError, KeyError)):
            evaluate_text(text, {"in1": tensor([1, 2])}, registry)

    def test_operation_failures(self, registry):
        with pytest.raises(OpError):
            evaluate_text("indexing(in1, 5)", {"in1": tensor([1, 2])}, registry)

    def test_reexecution(self, registry):
        """A solution re-executes on new inputs and on every example."""
        task = make_task(**ROW_SUMS)
        (solution,) = ValueSearch(task, registry).run()
        other = evaluate_expression(solution.expression, {"in1": tensor([[1, 1, 1]])})
        assert equal_output(other, tensor([3]))
        task = multi_example_task([({"in1": [[1, 2]]}, [3]), ({"in1": [[0, 5], [1, 1]]}, [5, 2])])
        results = evaluate_on_examples(solution.expression, task.examples)
        assert [r.payload.tolist() for r in results.values] == [[3], [5, 2]]

    def test_missing_input(self, registry):
        task = make_task(**ROW_SUMS)
        (solution,) = ValueSearch(task, registry).run()
        with pytest.raises(OpError):
            evaluate_expression(solution.expression, {})
