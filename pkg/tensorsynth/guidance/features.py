"""Feature vectors describing an input/output example.

The featurizer always sees exactly three inputs: missing ones are padded
with a dummy rank-0 int32 zero that sets the ``dummy`` kind. Each of the
three inputs and the output contributes the same block of value features,
then each input is compared with the output, and a final one-hot block
encodes the real number of inputs.

Value block:
    kind (tensor, primitive, tuple, dummy), dtype (int32, int64, float32,
    bool, none), rank 0..4, element count bucket, size of dims 0..3 as count
    buckets or absent, max/min/mean as float buckets or absent, count
    buckets and fractions of zero elements, elements in [0, 1] and unique
    elements, and whether the elements are all positive, all unique and
    sorted ascending.

Comparison block (input against output):
    element count and rank (less, equal, greater), same shape, count bucket
    and fraction of input elements found in the output and the reverse,
    whether all elements appear in each direction, whether every input dim
    is an output dim and the reverse.

Unbounded numbers are bucketed with the edges of :class:`BucketConfig`.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import TooManyInputs
from ..search.task import MAX_INPUTS, TaskSpec
from ..values.dtypes import DType
from ..values.value import Kind, Value
from .config import BucketConfig

VALUE_KINDS = ("tensor", "primitive", "tuple", "dummy")
DTYPES = (DType.I32, DType.I64, DType.F32, DType.BOOL, None)
MAX_RANK = 4
MAX_DIMS = 4
COMPARISONS = ("less", "equal", "greater")

DUMMY_INPUT = Value.of_tensor(0, DType.I32)


@dataclass(frozen=True)
class FeatureVector:
    """Feature values with their names; categorical features are one-hot."""

    names: Tuple[str, ...]
    values: np.ndarray

    def __len__(self):
        return len(self.values)

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.names.index(name)])


def bucket(x: float, edges: Sequence[float]) -> int:
    """Index of the first edge at least ``x``, or ``len(edges)`` past the last one."""
    return int(np.searchsorted(np.asarray(edges), x, side="left"))


def _elements(value: Value) -> np.ndarray:
    """Flattened elements of a value as float64."""
    if value.kind is Kind.TENSOR:
        return value.payload.ravel().astype(np.float64)
    if value.kind is Kind.TUPLE:
        parts = [_elements(member) for member in value.payload]
        return np.concatenate(parts) if parts else np.zeros(0)
    if value.kind is Kind.DTYPE:
        return np.zeros(0)
    return np.array([float(value.payload)])


def _dims(value: Value) -> Tuple[int, ...]:
    return tuple(value.shape) if value.kind is Kind.TENSOR else ()


class _Builder:
    """Accumulates named features in order."""

    def __init__(self):
        self.names: List[str] = []
        self.values: List[float] = []

    def one_hot(self, prefix: str, labels: Sequence[str], index: Optional[int]):
        for i, label in enumerate(labels):
            self.names.append(f"{prefix}.{label}")
            self.values.append(1.0 if i == index else 0.0)

    def number(self, name: str, x: float):
        self.names.append(name)
        self.values.append(float(x))

    def flag(self, name: str, condition: bool):
        self.number(name, 1.0 if condition else 0.0)


class Featurizer:
    """Turns tasks into fixed-length feature vectors."""

    def __init__(self, buckets: Optional[BucketConfig] = None):
        """Build a featurizer.

        Args:
            buckets: edges for count and float buckets, the shipped ones by default
        """
        self.buckets = buckets or BucketConfig()
        self._count_labels = self._labels(self.buckets.count_edges)
        self._float_labels = self._labels(self.buckets.float_edges)
        self._names: Optional[Tuple[str, ...]] = None

    @staticmethod
    def _labels(edges: Sequence[float]) -> List[str]:
        return [f"le{edge:g}" for edge in edges] + [f"gt{edges[-1]:g}"]

    @property
    def names(self) -> Tuple[str, ...]:
        """Feature names, identical for every task."""
        if self._names is None:
            self._names = self.featurize_example([DUMMY_INPUT], DUMMY_INPUT).names
        return self._names

    def __len__(self):
        return len(self.names)

    def featurize(self, task: TaskSpec) -> FeatureVector:
        """Features of the task's first example.

        Raises:
            TooManyInputs: If the task has more than three inputs
        """
        return self.featurize_example(list(task.inputs.values()), task.output)

    def featurize_example(self, inputs: Sequence[Value], output: Value) -> FeatureVector:
        """Features of one example given its inputs in order.

        Raises:
            TooManyInputs: If more than three inputs are given
        """
        if len(inputs) > MAX_INPUTS:
            raise TooManyInputs(f"the featurizer takes at most {MAX_INPUTS} inputs, got {len(inputs)}")
        padded = list(inputs) + [None] * (MAX_INPUTS - len(inputs))
        builder = _Builder()
        for i, value in enumerate(padded, start=1):
            self._value_features(builder, f"in{i}", value)
        self._value_features(builder, "out", output)
        for i, value in enumerate(padded, start=1):
            self._comparison_features(builder, f"in{i}_out", value or DUMMY_INPUT, output)
        builder.one_hot("num_inputs", [str(n) for n in range(1, MAX_INPUTS + 1)], len(inputs) - 1)
        return FeatureVector(tuple(builder.names), np.asarray(builder.values, dtype=np.float64))

    def _count(self, builder: _Builder, name: str, x: Optional[float]):
        if x is None:
            builder.one_hot(name, self._count_labels + ["absent"], len(self._count_labels))
        else:
            builder.one_hot(name, self._count_labels, bucket(x, self.buckets.count_edges))

    def _float(self, builder: _Builder, name: str, x: Optional[float]):
        labels = self._float_labels + ["absent"]
        index = len(self._float_labels) if x is None else bucket(x, self.buckets.float_edges)
        builder.one_hot(name, labels, index)

    def _value_features(self, builder: _Builder, prefix: str, value: Optional[Value]):
        dummy = value is None
        if dummy:
            value = DUMMY_INPUT
        if dummy:
            kind = "dummy"
        elif value.kind is Kind.TENSOR:
            kind = "tensor"
        elif value.kind is Kind.TUPLE:
            kind = "tuple"
        else:
            kind = "primitive"
        builder.one_hot(f"{prefix}.kind", VALUE_KINDS, VALUE_KINDS.index(kind))
        builder.one_hot(
            f"{prefix}.dtype", [d.value if d else "none" for d in DTYPES], DTYPES.index(value.dtype)
        )
        builder.one_hot(f"{prefix}.rank", [str(r) for r in range(MAX_RANK + 1)], min(value.rank, MAX_RANK))

        elements = _elements(value)
        size = len(elements)
        self._count(builder, f"{prefix}.num_elements", size)
        dims = _dims(value)
        for d in range(MAX_DIMS):
            self._count(builder, f"{prefix}.dim{d}", dims[d] if d < len(dims) else None)

        finite = elements[np.isfinite(elements)]
        for stat, reduce in (("max", np.max), ("min", np.min), ("mean", np.mean)):
            self._float(builder, f"{prefix}.{stat}", float(reduce(finite)) if len(finite) else None)

        zeros = int(np.count_nonzero(elements == 0))
        unit = int(np.count_nonzero((elements >= 0) & (elements <= 1)))
        unique = len(np.unique(elements))
        self._count(builder, f"{prefix}.num_zero", zeros)
        self._count(builder, f"{prefix}.num_in_unit", unit)
        self._count(builder, f"{prefix}.num_unique", unique)
        builder.number(f"{prefix}.frac_zero", zeros / size if size else 0.0)
        builder.number(f"{prefix}.frac_in_unit", unit / size if size else 0.0)
        builder.number(f"{prefix}.frac_unique", unique / size if size else 0.0)
        builder.flag(f"{prefix}.all_positive", size > 0 and bool(np.all(elements > 0)))
        builder.flag(f"{prefix}.all_unique", size > 0 and unique == size)
        builder.flag(f"{prefix}.sorted", size > 0 and bool(np.all(np.diff(elements) >= 0)))

    def _comparison_features(self, builder: _Builder, prefix: str, value: Value, output: Value):
        inputs, outputs = _elements(value), _elements(output)
        builder.one_hot(f"{prefix}.num_elements", COMPARISONS, _compare(len(inputs), len(outputs)))
        builder.one_hot(f"{prefix}.rank", COMPARISONS, _compare(value.rank, output.rank))
        builder.flag(f"{prefix}.same_shape", _dims(value) == _dims(output) and value.kind is output.kind)

        in_found = np.isin(inputs, outputs)
        out_found = np.isin(outputs, inputs)
        self._count(builder, f"{prefix}.num_in_found", int(in_found.sum()))
        builder.number(f"{prefix}.frac_in_found", in_found.mean() if len(inputs) else 0.0)
        self._count(builder, f"{prefix}.num_out_found", int(out_found.sum()))
        builder.number(f"{prefix}.frac_out_found", out_found.mean() if len(outputs) else 0.0)
        builder.flag(f"{prefix}.all_in_found", len(inputs) > 0 and bool(in_found.all()))
        builder.flag(f"{prefix}.all_out_found", len(outputs) > 0 and bool(out_found.all()))

        in_dims, out_dims = set(_dims(value)), set(_dims(output))
        builder.flag(f"{prefix}.in_dims_in_out", in_dims <= out_dims)
        builder.flag(f"{prefix}.out_dims_in_in", out_dims <= in_dims)


def _compare(a: float, b: float) -> int:
    return 0 if a < b else (1 if a == b else 2)


def featurize(task: TaskSpec, buckets: Optional[BucketConfig] = None) -> FeatureVector:
    return Featurizer(buckets).featurize(task)
