"""Synthetic training data from searches on random inputs.

Each run draws random inputs, enumerates values without a target output,
samples some of the derived values, collapses a random set of subtrees of
each into new inputs and keeps the result if it is a plausible task: at
least two operations, at most three inputs, only tensors and at most 50
elements in each.
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from ..registry.registry import OperationRegistry
from ..search.engine import harvest
from ..search.evaluate import evaluate_text
from ..search.task import MAX_INPUTS, Example, SearchConfig, TaskSpec
from ..values.compare import equal_exact
from ..values.literals import from_literal, to_literal
from ..values.render import RenderStyle, render
from ..values.value import Origin, Value, input_names, operations_used
from .collapse import collapse_subtrees
from .inputs import MAX_ELEMENTS, random_inputs

logger = logging.getLogger(__name__)

MIN_OPERATIONS = 2

# No program is asked to produce this, so no output check can succeed.
SENTINEL_OUTPUT = Value.of_tensor(False)


@dataclass(frozen=True)
class DatasetExample:
    """A program with the inputs it reads and the output it produces."""

    inputs: Dict[str, Value]
    output: Value
    program: str
    ops_used: Tuple[str, ...]

    def to_record(self) -> Dict[str, Any]:
        return {
            "inputs": {name: to_literal(value) for name, value in self.inputs.items()},
            "output": to_literal(self.output),
            "program": self.program,
            "ops_used": list(self.ops_used),
        }

    @classmethod
    def from_record(cls, record: Mapping[str, Any]) -> "DatasetExample":
        inputs = {name: from_literal(literal, origin=Origin.user_input(name)) for name, literal in record["inputs"].items()}
        return cls(inputs, from_literal(record["output"]), record["program"], tuple(record["ops_used"]))

    @property
    def key(self) -> str:
        """Stable digest of the example, used to split train and eval data."""
        return hashlib.sha256(repr(sorted(self.to_record().items())).encode()).hexdigest()

    def verify(self, registry: OperationRegistry) -> bool:
        """True if the program run on the inputs gives the output."""
        return equal_exact(evaluate_text(self.program, self.inputs, registry), self.output)


def _small_tensor(value: Value) -> bool:
    return value.is_tensor and value.payload.size <= MAX_ELEMENTS


def make_example(expression: Value, run_inputs: Mapping[str, Value], bindings: Mapping[str, Value]) -> Optional[DatasetExample]:
    """Turn a (collapsed) expression into an example, or None if it is filtered out."""
    ops = operations_used(expression)
    if len(ops) < MIN_OPERATIONS:
        return None
    names = sorted(input_names(expression), key=lambda name: (name in bindings, name))
    if not names or len(names) > MAX_INPUTS:
        return None
    inputs = {}
    for name in names:
        value = bindings.get(name) or run_inputs[name]
        if not _small_tensor(value):
            return None
        inputs[name] = value.as_leaf(Origin.user_input(name), 0)
    output = Value(expression.kind, expression.payload, Origin.heuristic("output"), weight=0)
    if not _small_tensor(output):
        return None
    return DatasetExample(inputs, output, render(expression, RenderStyle.FUNCTIONAL), tuple(sorted(ops)))


def harvest_run(
    registry: OperationRegistry,
    rng: np.random.Generator,
    settings: SearchConfig,
    per_run_cap: int,
    per_run_values: int,
    weights: Optional[Mapping[str, int]] = None,
) -> List[DatasetExample]:
    """One search on random inputs and the examples sampled from it."""
    run_inputs = random_inputs(rng)
    task = TaskSpec((Example(run_inputs, SENTINEL_OUTPUT),), settings=settings)
    explored = harvest(task, registry, weights, max_values=per_run_values)
    derived = [value.first for value in explored if value.first.history is not None]
    if len(derived) > per_run_cap:
        chosen = np.sort(rng.choice(len(derived), size=per_run_cap, replace=False))
        derived = [derived[i] for i in chosen]

    examples = []
    for expression in derived:
        variants = collapse_subtrees(expression)
        variant, bindings = variants[int(rng.integers(0, len(variants)))]
        example = make_example(variant, run_inputs, bindings)
        if example is not None:
            examples.append(example)
    return examples


def generate_dataset(
    registry: OperationRegistry,
    seed: int,
    runs: int,
    per_run_duration: float = 10.0,
    per_run_cap: int = 2000,
    per_run_values: int = 5000,
    weights: Optional[Mapping[str, int]] = None,
    max_weight: int = 200,
) -> List[DatasetExample]:
    """Generate examples from ``runs`` harvest searches.

    Args:
        registry: operations the programs may use
        seed: seed of every random choice; a fixed seed gives the same dataset
        runs: number of searches
        per_run_duration: wall-clock cap of each search in seconds; a run cut
            by it depends on machine speed, so a seed fixes the dataset only
            when per_run_values is reached first
        per_run_cap: most derived values sampled per search
        per_run_values: values each search enumerates before stopping
        weights: operation weights, defaults to the base weights
        max_weight: largest expression weight enumerated

    Returns:
        The examples, possibly none
    """
    settings = SearchConfig(timeout=per_run_duration, max_weight=max_weight, require_all_inputs=False)
    dataset: List[DatasetExample] = []
    for run in range(runs):
        rng = np.random.default_rng([seed, run])
        examples = harvest_run(registry, rng, settings, per_run_cap, per_run_values, weights)
        logger.debug("Run %d produced %d examples", run + 1, len(examples))
        dataset.extend(examples)
    logger.info("Generated %d examples from %d runs", len(dataset), runs)
    return dataset


def split_dataset(
    dataset: Iterable[DatasetExample], eval_fraction: float = 0.05
) -> Tuple[List[DatasetExample], List[DatasetExample]]:
    """Deterministic train/eval split by example digest."""
    train, evaluation = [], []
    threshold = int(eval_fraction * 10000)
    for example in dataset:
        bucket = int(example.key[:8], 16) % 10000
        (evaluation if bucket < threshold else train).append(example)
    return train, evaluation


def label_counts(dataset: Iterable[DatasetExample]) -> Dict[str, int]:
    """How many examples use each operation."""
    counts: Dict[str, int] = {}
    for example in dataset:
        for name in example.ops_used:
            counts[name] = counts.get(name, 0) + 1
    return counts
