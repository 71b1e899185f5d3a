"""Synthesis problems and the task file format.

A task file is a JSON document::

    {
      "description": "Group items by value and get the group indices.",
      "inputs": {"in1": [45, 58, 72, 33, 45, 58, 58, 33]},
      "output": [0, 1, 2, 3, 0, 1, 1, 3],
      "constants": [10]
    }

Several examples are given with ``"examples": [{"inputs": ..., "output": ...}]``
instead of the top-level ``inputs``/``output`` pair. Tensor literals follow
:mod:`tensorsynth.values.literals`; constants read bare numbers as primitives.
"""

import json
import keyword
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Tuple

from ..exceptions import LimitViolation, TaskParseError
from ..values.compare import DEFAULT_LIMITS, DEFAULT_TOLERANCE, SizeLimits, ToleranceConfig, within_limits
from ..values.literals import from_literal
from ..values.value import USER_CONSTANT, Origin, Value

MAX_INPUTS = 3

DEFAULT_ORIGIN_WEIGHTS = {
    "input": 8,
    "constant": 7,
    "common_constant": 8,
    "axis": 8,
    "dimension": 12,
    "output_shape": 12,
}

# Names the expression interpreter reads as dtype literals or booleans
RESERVED_NAMES = frozenset({"int32", "int64", "float32", "bool", "True", "False", "None"})

_TASK_KEYS = {"description", "inputs", "output", "examples", "constants"}


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of one search run.

    The ablation flags reproduce the filtering and weighting experiments:
    ``disable_filters`` executes every candidate, ``equal_weights`` sets every
    operation and leaf weight to 1.
    """

    timeout: float = 300.0
    max_weight: int = 200
    max_solutions: int = 1
    require_all_inputs: bool = True
    tolerance: ToleranceConfig = DEFAULT_TOLERANCE
    disable_filters: bool = False
    equal_weights: bool = False
    disable_tensor_model: bool = False
    disable_nl_model: bool = False
    rng_seed: int = 0
    limits: SizeLimits = DEFAULT_LIMITS
    origin_weights: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_ORIGIN_WEIGHTS))
    log_progress: bool = False

    def __post_init__(self):
        """Validate the configuration."""
        if not self.timeout > 0:
            raise ValueError(f"timeout must be positive, got {self.timeout}")
        if self.max_solutions < 1:
            raise ValueError(f"max_solutions must be at least 1, got {self.max_solutions}")
        missing = set(DEFAULT_ORIGIN_WEIGHTS) - set(self.origin_weights)
        if missing:
            raise ValueError(f"origin_weights lacks {sorted(missing)}")
        if any(not isinstance(w, int) or w < 1 for w in self.origin_weights.values()):
            raise ValueError("origin weights must be positive integers")
        if self.max_weight < self.smallest_leaf_weight:
            raise ValueError(f"max_weight must be at least {self.smallest_leaf_weight}, got {self.max_weight}")

    def leaf_weight(self, origin: str) -> int:
        """Weight of an initial value of the given origin."""
        if self.equal_weights:
            return 1
        return self.origin_weights[origin]

    @property
    def smallest_leaf_weight(self) -> int:
        return 1 if self.equal_weights else min(self.origin_weights.values())

    @classmethod
    def from_config(cls, config: Mapping[str, Any], **overrides) -> "SearchConfig":
        """Defaults from an application config mapping, then explicit overrides."""
        values = dict(
            timeout=config.get("SEARCH_TIMEOUT", 300.0),
            max_weight=config.get("SEARCH_MAX_WEIGHT", 200),
            max_solutions=config.get("SEARCH_MAX_SOLUTIONS", 1),
            require_all_inputs=config.get("SEARCH_REQUIRE_ALL_INPUTS", True),
            tolerance=ToleranceConfig(
                rel_tol=config.get("SEARCH_REL_TOL", DEFAULT_TOLERANCE.rel_tol),
                abs_tol=config.get("SEARCH_ABS_TOL", DEFAULT_TOLERANCE.abs_tol),
            ),
            origin_weights=dict(config.get("ORIGIN_WEIGHTS", DEFAULT_ORIGIN_WEIGHTS)),
            log_progress=config.get("LOG_SEARCH_PROGRESS", False),
        )
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass(frozen=True)
class Example:
    """One input/output pair; ``inputs`` keeps the task's input order."""

    inputs: Dict[str, Value]
    output: Value

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self.inputs)


@dataclass(frozen=True)
class TaskSpec:
    """A synthesis problem: examples, optional description and constants."""

    examples: Tuple[Example, ...]
    description: str = ""
    constants: Tuple[Value, ...] = ()
    settings: SearchConfig = field(default_factory=SearchConfig)

    def __post_init__(self):
        """Check the examples agree with each other and fit the size limits."""
        if not self.examples:
            raise ValueError("a task needs at least one example")
        names = self.examples[0].names
        if not 1 <= len(names) <= MAX_INPUTS:
            raise ValueError(f"a task takes 1 to {MAX_INPUTS} inputs, got {len(names)}")
        for index, example in enumerate(self.examples):
            if example.names != names:
                raise ValueError(f"example {index + 1} has inputs {list(example.names)}, expected {list(names)}")
            for name, value in example.inputs.items():
                if not within_limits(value, self.settings.limits):
                    raise LimitViolation(f"input '{name}' of example {index + 1} exceeds the size limits")
            if not within_limits(example.output, self.settings.limits):
                raise LimitViolation(f"output of example {index + 1} exceeds the size limits")

    @property
    def input_names(self) -> Tuple[str, ...]:
        return self.examples[0].names

    @property
    def num_inputs(self) -> int:
        return len(self.input_names)

    @property
    def inputs(self) -> Dict[str, Value]:
        """Inputs of the first example."""
        return self.examples[0].inputs

    @property
    def output(self) -> Value:
        """Output of the first example."""
        return self.examples[0].output

    def with_settings(self, settings: SearchConfig) -> "TaskSpec":
        return TaskSpec(self.examples, self.description, self.constants, settings)


def parse_task(path: str, settings: Optional[SearchConfig] = None) -> TaskSpec:
    """Read and validate a task file.

    Args:
        path: path to the JSON task file
        settings: search configuration attached to the task

    Returns:
        The validated task

    Raises:
        TaskParseError: If the file is not valid JSON or violates the format
        LimitViolation: If an example tensor exceeds the size limits
    """
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except FileNotFoundError:
        raise TaskParseError(0, f"task file not found: {path}")
    return task_from_text(text, settings)


def task_from_text(text: str, settings: Optional[SearchConfig] = None) -> TaskSpec:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise TaskParseError(e.lineno, e.msg)
    return task_from_dict(document, settings, text=text)


def task_from_dict(document: Any, settings: Optional[SearchConfig] = None, text: str = "") -> TaskSpec:
    """Build a task from a decoded task document.

    ``text`` is the original file content, used to point errors at a line.
    """
    locate = _Locator(text)
    if not isinstance(document, dict):
        raise TaskParseError(1 if text else 0, "a task must be a JSON object")
    unknown = sorted(set(document) - _TASK_KEYS)
    if unknown:
        raise TaskParseError(locate(unknown[0]), f"unknown keys {unknown}")

    if "examples" in document:
        if "output" in document or "inputs" in document:
            key = "output" if "output" in document else "inputs"
            raise TaskParseError(locate(key), "'examples' cannot be combined with top-level 'inputs'/'output'")
        raw_examples = document["examples"]
        if not isinstance(raw_examples, list) or not raw_examples:
            raise TaskParseError(locate("examples"), "'examples' must be a non-empty list")
    else:
        if "inputs" not in document or "output" not in document:
            raise TaskParseError(0, "a task needs 'inputs' and 'output', or 'examples'")
        raw_examples = [{"inputs": document["inputs"], "output": document["output"]}]

    examples = tuple(_example(raw, index, locate) for index, raw in enumerate(raw_examples))

    constants = []
    raw_constants = document.get("constants", [])
    if not isinstance(raw_constants, list):
        raise TaskParseError(locate("constants"), "'constants' must be a list")
    for raw in raw_constants:
        try:
            constants.append(from_literal(raw, origin=USER_CONSTANT, scalars_as_primitives=True))
        except ValueError as e:
            raise TaskParseError(locate("constants"), f"bad constant {raw!r}: {e}")

    description = document.get("description", "")
    if not isinstance(description, str):
        raise TaskParseError(locate("description"), "'description' must be a string")

    try:
        return TaskSpec(
            examples=examples,
            description=description,
            constants=tuple(constants),
            settings=settings or SearchConfig(),
        )
    except LimitViolation:
        raise
    except ValueError as e:
        raise TaskParseError(0, str(e))


def _example(raw: Any, index: int, locate: "_Locator") -> Example:
    if not isinstance(raw, dict) or set(raw) != {"inputs", "output"}:
        raise TaskParseError(locate("examples"), f"example {index + 1} must have exactly 'inputs' and 'output'")
    raw_inputs = raw["inputs"]
    if not isinstance(raw_inputs, dict) or not raw_inputs:
        raise TaskParseError(locate("inputs"), "'inputs' must map input names to tensors")
    inputs = {}
    for name, literal in raw_inputs.items():
        if not name.isidentifier() or keyword.iskeyword(name) or name in RESERVED_NAMES:
            raise TaskParseError(locate(name), f"'{name}' cannot be used as an input name")
        try:
            inputs[name] = from_literal(literal, origin=Origin.user_input(name))
        except ValueError as e:
            raise TaskParseError(locate(name), f"input '{name}': {e}")
    try:
        output = from_literal(raw["output"])
    except ValueError as e:
        raise TaskParseError(locate("output"), f"output: {e}")
    return Example(inputs, output)


class _Locator:
    """Finds the line on which a JSON key first appears."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def __call__(self, key: str) -> int:
        pattern = re.compile(r'"' + re.escape(key) + r'"\s*:')
        for number, line in enumerate(self.lines, start=1):
            if pattern.search(line):
                return number
        return 0
