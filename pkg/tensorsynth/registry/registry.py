"""The operation registry, weight tables and operation application."""

import dataclasses
import logging
import re
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence

import numpy as np

from ..exceptions import (
    MissingDocstring,
    MissingWeight,
    OpError,
    OpErrorKind,
    ServiceConfigurationError,
    UnknownOpError,
)
from ..values.compare import DEFAULT_LIMITS, SizeLimits, within_limits
from ..values.value import DERIVED, ExpressionNode, Kind, Value
from .operation import OperationSpec
from .ops_python import PYTHON_OPERATIONS
from .ops_tensorflow import TENSORFLOW_OPERATIONS

logger = logging.getLogger(__name__)

BUILTIN_OPERATIONS: List[OperationSpec] = TENSORFLOW_OPERATIONS + PYTHON_OPERATIONS

_WEIGHT_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(-?\d+)\s*$")
_DOC_HEADER = re.compile(r"^\[([A-Za-z_][A-Za-z0-9_]*)\]\s*$")


class WeightTable(Mapping[str, int]):
    """Immutable map from operation name to positive integer weight."""

    def __init__(self, weights: Mapping[str, int]):
        """Validate and freeze the weights."""
        for name, weight in weights.items():
            if not isinstance(weight, int) or weight < 1:
                raise ServiceConfigurationError(f"Weight of '{name}' must be a positive integer, got {weight!r}")
        self._weights: Dict[str, int] = dict(weights)

    def __getitem__(self, name: str) -> int:
        return self._weights[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._weights)

    def __len__(self) -> int:
        return len(self._weights)

    def updated(self, changes: Mapping[str, int]) -> "WeightTable":
        """A copy with some entries replaced."""
        merged = dict(self._weights)
        merged.update(changes)
        return WeightTable(merged)

    def uniform(self, weight: int = 1) -> "WeightTable":
        """A copy with every entry set to ``weight`` (equal-weights ablation)."""
        return WeightTable({name: weight for name in self._weights})

    def __repr__(self):
        return f"WeightTable({len(self)} operations)"


def load_weights(path: str) -> WeightTable:
    """Read a weight table file of ``name = integer`` lines.

    Args:
        path: path to the weight table

    Returns:
        The parsed table

    Raises:
        ServiceConfigurationError: If the file is missing or malformed
    """
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except FileNotFoundError:
        raise ServiceConfigurationError(f"Weight table not found: {path}")

    weights: Dict[str, int] = {}
    for number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        match = _WEIGHT_LINE.match(text)
        if not match:
            raise ServiceConfigurationError(f"{path}:{number}: expected 'name = integer', got {line!r}")
        name, weight = match.group(1), int(match.group(2))
        if name in weights:
            raise ServiceConfigurationError(f"{path}:{number}: duplicate weight for '{name}'")
        weights[name] = weight
    return WeightTable(weights)


def load_docstrings(path: str) -> Dict[str, str]:
    """Read a docstring file made of ``[name]`` headers followed by free text."""
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
    except FileNotFoundError:
        raise ServiceConfigurationError(f"Docstring file not found: {path}")

    docs: Dict[str, List[str]] = {}
    current: Optional[str] = None
    for number, line in enumerate(lines, start=1):
        header = _DOC_HEADER.match(line)
        if header:
            current = header.group(1)
            if current in docs:
                raise ServiceConfigurationError(f"{path}:{number}: duplicate docstring for '{current}'")
            docs[current] = []
        elif current is not None:
            docs[current].append(line.strip())
        elif line.strip() and not line.lstrip().startswith("#"):
            raise ServiceConfigurationError(f"{path}:{number}: text before the first [name] header")
    return {name: " ".join(part for part in body if part) for name, body in docs.items()}


class OperationRegistry:
    """Ordered, immutable collection of operations with their base weights."""

    def __init__(self, operations: Sequence[OperationSpec]):
        """Index the operations by name, keeping their order."""
        self._operations = tuple(operations)
        self._by_name: Dict[str, OperationSpec] = {}
        for op in self._operations:
            if op.name in self._by_name:
                raise ServiceConfigurationError(f"Operation '{op.name}' is registered twice")
            self._by_name[op.name] = op

    def get(self, name: str) -> OperationSpec:
        """Look up an operation.

        ``argmax_2`` style names, the operation name suffixed with its arity,
        are accepted as well.

        Raises:
            UnknownOpError: If no operation has that name
        """
        op = self._by_name.get(name)
        if op is None:
            base, _, arity = name.rpartition("_")
            candidate = self._by_name.get(base)
            if candidate is not None and arity.isdigit() and int(arity) == candidate.arity:
                op = candidate
        if op is None:
            raise UnknownOpError(name, self.names())
        return op

    def __contains__(self, name: object) -> bool:
        if not isinstance(name, str):
            return False
        try:
            self.get(name)
        except UnknownOpError:
            return False
        return True

    def __iter__(self) -> Iterator[OperationSpec]:
        return iter(self._operations)

    def __len__(self) -> int:
        return len(self._operations)

    def names(self) -> List[str]:
        return [op.name for op in self._operations]

    def weights(self) -> WeightTable:
        """The base weight table of this registry."""
        return WeightTable({op.name: op.base_weight for op in self._operations})

    def subset(self, names: Iterable[str]) -> "OperationRegistry":
        """A registry holding only the named operations, in registry order."""
        wanted = {self.get(name).name for name in names}
        return OperationRegistry([op for op in self._operations if op.name in wanted])

    def __repr__(self):
        return f"OperationRegistry({len(self)} operations)"


def registry_build(
    weights: Mapping[str, int],
    docstrings: Optional[Mapping[str, str]] = None,
    operations: Sequence[OperationSpec] = BUILTIN_OPERATIONS,
) -> OperationRegistry:
    """Build the registry, binding base weights and docstrings to each operation.

    Raises:
        MissingWeight: If the weight table lacks an operation
        MissingDocstring: If docstrings are given but lack an operation
    """
    bound = []
    for op in operations:
        if op.name not in weights:
            raise MissingWeight(op.name)
        doc = op.docstring
        if docstrings is not None:
            if not docstrings.get(op.name):
                raise MissingDocstring(op.name)
            doc = docstrings[op.name]
        bound.append(dataclasses.replace(op, base_weight=int(weights[op.name]), docstring=doc))
    unused = sorted(set(weights) - {op.name for op in operations})
    if unused:
        logger.debug("Weight table entries without an operation: %s", ", ".join(unused))
    return OperationRegistry(bound)


def docstring(registry: OperationRegistry, op_name: str) -> str:
    """The English docstring of an operation.

    Raises:
        UnknownOpError: If the operation is not registered
    """
    return registry.get(op_name).docstring


def arg_filter_pass(op: OperationSpec, position: int, value: Value) -> bool:
    return op.arg_filter_pass(position, value)


def combination_filter_pass(op: OperationSpec, args: Sequence[Value]) -> bool:
    return op.combination_filter_pass(args)


def apply_operation(
    op: OperationSpec,
    args: Sequence[Value],
    *,
    weight: Optional[int] = None,
    prechecked: bool = False,
    limits: SizeLimits = DEFAULT_LIMITS,
) -> Value:
    """Execute an operation and wrap the result as a derived value.

    Args:
        op: the operation
        args: one value per argument
        weight: operation weight to record, defaults to the base weight
        prechecked: skip the filters because the caller already ran them
        limits: size limits the result must respect

    Returns:
        The derived value

    Raises:
        OpError: on any failure; the search discards such candidates
    """
    args = tuple(args)
    if len(args) != op.arity:
        raise OpError(OpErrorKind.PRECONDITION_VIOLATED, f"{op.name} takes {op.arity} arguments")
    if not prechecked and not op.accepts(args):
        raise OpError(OpErrorKind.PRECONDITION_VIOLATED, f"arguments rejected by the filters of {op.name}")
    try:
        with np.errstate(all="raise", under="ignore"):
            result = op.executor(*args)
    except OpError:
        raise
    except (FloatingPointError, OverflowError, ZeroDivisionError) as e:
        raise OpError(OpErrorKind.NUMERIC_ERROR, f"{op.name}: {e}")
    except (ValueError, TypeError, IndexError) as e:
        raise OpError(OpErrorKind.PRECONDITION_VIOLATED, f"{op.name}: {e}")
    except MemoryError:
        raise OpError(OpErrorKind.LIMIT_EXCEEDED, f"{op.name}: out of memory")
    except Exception as e:
        # unfiltered arguments reach executors in ways they were never written for
        raise OpError(OpErrorKind.PRECONDITION_VIOLATED, f"{op.name}: {type(e).__name__}: {e}")

    node = ExpressionNode(op, args, op.base_weight if weight is None else weight)
    value = _wrap(result, node)
    if not within_limits(value, limits):
        raise OpError(OpErrorKind.LIMIT_EXCEEDED, f"{op.name}: result exceeds size limits")
    return value


def _wrap(result, node: ExpressionNode) -> Value:
    if isinstance(result, Value):
        return Value(result.kind, result.payload, DERIVED, history=node)
    if isinstance(result, tuple):
        return Value(Kind.TUPLE, result, DERIVED, history=node)
    array = np.asarray(result)
    if array.dtype.kind == "f":
        if array.dtype != np.float32:
            array = array.astype(np.float32)
        if not np.all(np.isfinite(array)):
            raise OpError(OpErrorKind.NUMERIC_ERROR, f"{node.op_name}: non-finite result")
    try:
        return Value(Kind.TENSOR, array, DERIVED, history=node)
    except ValueError as e:
        raise OpError(OpErrorKind.UNSUPPORTED, f"{node.op_name}: {e}")
