"""Weighted bottom-up value search.

Expressions are enumerated in order of increasing weight. For a target weight
``W`` every operation ``op`` splits the remaining weight ``W - weight(op)``
among its arguments, takes the stored values of each argument weight that pass
the argument filter, and executes every combination that passes the
combination filter. New values are stored unless an equivalent value already
exists; every executed value is compared with the target output.
"""

import dataclasses
import heapq
import itertools
import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..exceptions import OpError, SearchExhausted, SearchTimeout
from ..registry.operation import OperationSpec
from ..registry.registry import OperationRegistry, apply_operation
from ..values.compare import ToleranceConfig, equal_output
from ..values.render import RenderStyle, render
from ..values.value import Kind, Value, input_names
from .constants import collect_initial_values
from .explored import ExploredSet, SuperValue, combination_passes, weight_compositions
from .task import TaskSpec

logger = logging.getLogger(__name__)

TIMEOUT_CHECK_INTERVAL = 1024


@dataclass
class SearchStats:
    """Counters of the filtering funnel and of the stored values."""

    values_explored: int = 0
    candidates_before_arg_filters: int = 0
    after_arg_filters: int = 0
    after_combination_filters: int = 0
    executions: int = 0
    exec_errors: int = 0
    dedup_hits: int = 0
    max_weight_reached: int = 0
    elapsed: float = 0.0

    @property
    def arg_filter_elimination(self) -> float:
        """Fraction of candidate argument lists removed by argument filters."""
        if not self.candidates_before_arg_filters:
            return 0.0
        return 1 - self.after_arg_filters / self.candidates_before_arg_filters

    @property
    def combination_filter_elimination(self) -> float:
        """Fraction of the remaining lists removed by combination filters."""
        if not self.after_arg_filters:
            return 0.0
        return 1 - self.after_combination_filters / self.after_arg_filters

    def copy(self) -> "SearchStats":
        return dataclasses.replace(self)

    def as_dict(self, timing: bool = True) -> Dict[str, float]:
        data = dataclasses.asdict(self)
        if not timing:
            data.pop("elapsed")
        return data


@dataclass(frozen=True)
class Solution:
    """A program consistent with every example."""

    expression: Value
    values: SuperValue
    weight: int
    elapsed: float
    functional: str
    pythonic: str
    stats: SearchStats

    def rendered(self, style: RenderStyle) -> str:
        return self.functional if style is RenderStyle.FUNCTIONAL else self.pythonic


class Outcome:
    """Why a search stopped."""

    SOLVED = "solved"
    TIMEOUT = "timeout"
    EXHAUSTED = "exhausted"


class _Timeout(Exception):
    pass


def try_cast_match(
    value: Value, target: Value, tol: ToleranceConfig, cast_op: OperationSpec, dtype_leaf: Value, weight=None
) -> Optional[Value]:
    """Check whether casting a fresh tensor to the target dtype matches the target.

    Args:
        value: a freshly created value
        target: the expected output
        tol: float tolerance for the comparison
        cast_op: the registry's cast operation
        dtype_leaf: the stored dtype literal naming ``target``'s dtype
        weight: weight charged for the cast operation

    Returns:
        The cast value when it matches, otherwise None. The cast value is
        never stored.
    """
    if not (value.is_tensor and target.is_tensor):
        return None
    if value.shape != target.shape or value.dtype is target.dtype:
        return None
    try:
        cast = apply_operation(cast_op, (value, dtype_leaf), weight=weight, prechecked=True)
    except OpError:
        return None
    return cast if equal_output(cast, target, tol) else None


class ValueSearch:
    """One search over a task.

    Usage::

        search = ValueSearch(task, registry, weights)
        for solution in search.solutions():
            ...
        search.outcome, search.stats

    Set ``harvest`` to enumerate values without looking at the output; the
    search then stops after ``max_values`` stored values or at the timeout.
    """

    def __init__(
        self,
        task: TaskSpec,
        registry: OperationRegistry,
        weights: Optional[Mapping[str, int]] = None,
        *,
        harvest: bool = False,
        max_values: Optional[int] = None,
        clock: Callable[[], float] = time.monotonic,
    ):
        """Prepare the search; nothing runs until :meth:`solutions` is iterated."""
        self.task = task
        self.settings = task.settings
        self.registry = registry
        weights = weights if weights is not None else registry.weights()
        self.op_weights: Dict[str, int] = {
            op.name: 1 if self.settings.equal_weights else int(weights[op.name]) for op in registry
        }
        self.harvest = harvest
        self.max_values = max_values
        self.clock = clock
        self.stats = SearchStats()
        self.outcome: Optional[str] = None
        self.explored: Optional[ExploredSet] = None
        self.found: List[Solution] = []
        self._rendered = set()
        self._pending: List[Tuple[int, int, Solution]] = []
        self._sequence = itertools.count()
        self._dtype_leaves: Dict = {}
        self._start = 0.0
        self._visited = 0

    # ---- Public API ----
    def solutions(self) -> Iterator[Solution]:
        """Run the search, yielding solutions in non-decreasing weight order."""
        self._start = self.clock()
        self.explored = collect_initial_values(self.task)
        for value in self.explored:
            if value.first.kind is Kind.DTYPE:
                self._dtype_leaves.setdefault(value.first.payload, value.first)
        self.stats.values_explored = len(self.explored)
        try:
            if not self.harvest:
                for value in list(self.explored):
                    if self._matches(value):
                        yield from self._emit(self._solution(value))
                        if self._done():
                            return
            yield from self._enumerate()
        except _Timeout:
            self.outcome = Outcome.TIMEOUT
            logger.info("Search timed out after %.1f s", self.clock() - self._start)
        finally:
            self.stats.elapsed = self.clock() - self._start
        yield from self._flush_pending()

    def run(self) -> List[Solution]:
        """Run to completion and return every solution found."""
        return list(self.solutions())

    # ---- Enumeration ----
    def _enumerate(self) -> Iterator[Solution]:
        explored = self.explored
        settings = self.settings
        operations = [op for op in self.registry]
        weight = explored.weights()[0] if explored.weights() else 1
        while weight <= settings.max_weight:
            if self._limit_reached(explored):
                self.outcome = Outcome.EXHAUSTED
                return
            if self.clock() - self._start > settings.timeout:
                raise _Timeout()
            yield from self._flush_pending(weight)
            if self._done():
                return
            for op in operations:
                yield from self._enumerate_op(op, weight)
                if self._done() or self._harvest_full():
                    return
            self.stats.max_weight_reached = weight
            self._log_progress(weight)
            weight += 1
        self.outcome = Outcome.EXHAUSTED

    def _enumerate_op(self, op: OperationSpec, weight: int) -> Iterator[Solution]:
        explored = self.explored
        op_weight = self.op_weights[op.name]
        remaining = weight - op_weight
        if remaining < op.arity:
            return
        available = explored.weights()
        for parts in weight_compositions(remaining, op.arity, available):
            candidates = [explored.filtered_values(op.arg_filters[i], part) for i, part in enumerate(parts)]
            total = 1
            admitted = 1
            for part, values in zip(parts, candidates):
                total *= explored.count(part)
                admitted *= len(values)
            self.stats.candidates_before_arg_filters += total
            self.stats.after_arg_filters += admitted
            if not admitted:
                continue
            for args in itertools.product(*candidates):
                self._tick()
                if not self.settings.disable_filters and not combination_passes(op.combination_filter, args):
                    continue
                self.stats.after_combination_filters += 1
                result = self._execute(op, op_weight, args)
                if result is None:
                    continue
                if explored.add(result):
                    self.stats.values_explored += 1
                    if self._harvest_full():
                        return
                else:
                    self.stats.dedup_hits += 1
                if self.harvest:
                    continue
                if self._matches(result):
                    yield from self._emit(self._solution(result))
                    if self._done():
                        return
                elif explored.representative(result) is result:
                    self._queue_cast_solution(result)

    def _tick(self):
        """Count an argument list; the clock is read once per TIMEOUT_CHECK_INTERVAL of them."""
        self._visited += 1
        if self._visited % TIMEOUT_CHECK_INTERVAL == 0 and self.clock() - self._start > self.settings.timeout:
            raise _Timeout()

    def _execute(self, op: OperationSpec, op_weight: int, args: Sequence[SuperValue]) -> Optional[SuperValue]:
        self.stats.executions += 1
        results = []
        try:
            for index in range(len(self.task.examples)):
                example_args = [arg.values[index] for arg in args]
                results.append(
                    apply_operation(op, example_args, weight=op_weight, prechecked=True, limits=self.settings.limits)
                )
        except OpError:
            self.stats.exec_errors += 1
            return None
        return SuperValue(results)

    def _limit_reached(self, explored: ExploredSet) -> bool:
        """True when no operation can be completed at any further weight."""
        largest = explored.max_weight
        bound = max((self.op_weights[op.name] + op.arity * largest for op in self.registry), default=0)
        return self.stats.max_weight_reached >= bound

    # ---- Solutions ----
    def _matches(self, value: SuperValue) -> bool:
        tol = self.settings.tolerance
        for candidate, example in zip(value.values, self.task.examples):
            if not equal_output(candidate, example.output, tol):
                return False
        return self._uses_inputs(value.first)

    def _uses_inputs(self, expression: Value) -> bool:
        if not self.settings.require_all_inputs:
            return True
        return set(self.task.input_names) <= input_names(expression)

    def _queue_cast_solution(self, value: SuperValue) -> None:
        """Hold a cast solution until the search reaches its weight."""
        if "cast" not in self.registry or not value.first.is_tensor:
            return
        target = self.task.output
        if not target.is_tensor or value.first.dtype is target.dtype:
            return
        dtype_leaf = self._dtype_leaves.get(target.dtype)
        if dtype_leaf is None:
            return
        cast_op = self.registry.get("cast")
        cast_weight = self.op_weights["cast"]
        casts = []
        for candidate, example in zip(value.values, self.task.examples):
            cast = try_cast_match(candidate, example.output, self.settings.tolerance, cast_op, dtype_leaf, cast_weight)
            if cast is None:
                return
            casts.append(cast)
        if not self._uses_inputs(casts[0]):
            return
        solution = self._solution(SuperValue(casts))
        heapq.heappush(self._pending, (solution.weight, next(self._sequence), solution))

    def _solution(self, value: SuperValue) -> Solution:
        expression = value.first
        return Solution(
            expression=expression,
            values=value,
            weight=expression.weight,
            elapsed=self.clock() - self._start,
            functional=render(expression, RenderStyle.FUNCTIONAL),
            pythonic=render(expression, RenderStyle.PYTHONIC),
            stats=self.stats.copy(),
        )

    def _emit(self, solution: Solution) -> Iterator[Solution]:
        if solution.functional in self._rendered:
            return
        self._rendered.add(solution.functional)
        self.found.append(solution)
        logger.debug("Solution of weight %d: %s", solution.weight, solution.pythonic)
        if len(self.found) >= self.settings.max_solutions:
            self.outcome = Outcome.SOLVED
        yield solution

    def _flush_pending(self, up_to: Optional[int] = None) -> Iterator[Solution]:
        while self._pending and not self._done():
            if up_to is not None and self._pending[0][0] > up_to:
                return
            _, _, solution = heapq.heappop(self._pending)
            yield from self._emit(solution)

    def _done(self) -> bool:
        return len(self.found) >= self.settings.max_solutions

    def _harvest_full(self) -> bool:
        return self.harvest and self.max_values is not None and len(self.explored) >= self.max_values

    def _log_progress(self, weight: int):
        level = logging.INFO if self.settings.log_progress else logging.DEBUG
        logger.log(
            level,
            "Weight %d done: %d values explored, %d executions",
            weight,
            self.stats.values_explored,
            self.stats.executions,
        )


def search(
    task: TaskSpec, registry: OperationRegistry, weights: Optional[Mapping[str, int]] = None
) -> Iterator[Solution]:
    """Stream solutions of a task in non-decreasing weight order.

    Raises:
        SearchTimeout: If the time budget ran out before any solution
        SearchExhausted: If the weight space was exhausted without a solution
    """
    value_search = ValueSearch(task, registry, weights)
    yield from value_search.solutions()
    if not value_search.found:
        if value_search.outcome == Outcome.TIMEOUT:
            raise SearchTimeout(f"No solution within {task.settings.timeout} s")
        raise SearchExhausted(f"No solution up to weight {value_search.stats.max_weight_reached}")


def harvest(
    task: TaskSpec,
    registry: OperationRegistry,
    weights: Optional[Mapping[str, int]] = None,
    max_values: Optional[int] = None,
) -> ExploredSet:
    """Enumerate values of a task without a target and return the explored set."""
    value_search = ValueSearch(task, registry, weights, harvest=True, max_values=max_values)
    for _ in value_search.solutions():
        pass
    return value_search.explored
