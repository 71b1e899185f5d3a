"""Reusable argument and combination filters.

Argument filters look at one candidate value in isolation and are cached by
the search per (filter, weight). Combination filters look at a whole argument
list right before execution. Both must be cheap and must never reject an
argument list the operation could execute successfully.
"""

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..values.compare import DEFAULT_LIMITS
from ..values.dtypes import DType
from ..values.shapes import can_broadcast
from ..values.value import Kind, Value

MAX_RANK = DEFAULT_LIMITS.max_rank


@dataclass(frozen=True)
class ArgFilter:
    """A named predicate over one argument value."""

    name: str
    predicate: Callable[[Value], bool]

    def __call__(self, value: Value) -> bool:
        return self.predicate(value)


@dataclass(frozen=True)
class CombinationFilter:
    """A named predicate over a full argument list."""

    name: str
    predicate: Callable[[Sequence[Value]], bool]

    def __call__(self, args: Sequence[Value]) -> bool:
        return self.predicate(args)


def arg_filter(func: Callable[[Value], bool]) -> ArgFilter:
    return ArgFilter(func.__name__, func)


def combination_filter(func: Callable[[Sequence[Value]], bool]) -> CombinationFilter:
    return CombinationFilter(func.__name__, func)


# ---- Helpers ----
def is_int_vector(value: Value) -> bool:
    return value.is_tensor and value.payload.ndim == 1 and value.dtype.is_integer


def int_sequence(value: Value):
    """The integers held by a tuple of ints or a 1-D integer tensor."""
    if value.kind is Kind.TUPLE:
        return [member.payload for member in value.payload]
    return [int(x) for x in value.payload]


def scalar_number(value: Value):
    """Python number held by a primitive or a rank-0 tensor."""
    if value.is_tensor:
        return value.payload.item()
    return value.payload


def axis_in_range(axis: int, rank: int, extra: int = 0) -> bool:
    """True iff ``axis`` indexes a tensor of rank ``rank + extra``."""
    rank += extra
    return -rank <= axis < rank


def operand_dtype(value: Value):
    """Dtype a binary operand contributes; primitives adapt to the other operand."""
    return value.dtype if value.is_tensor else None


# ---- Argument filters ----
@arg_filter
def any_value(value: Value) -> bool:
    return True


@arg_filter
def tensor(value: Value) -> bool:
    return value.is_tensor


@arg_filter
def nonscalar_tensor(value: Value) -> bool:
    return value.is_tensor and value.payload.ndim >= 1


@arg_filter
def numeric_tensor(value: Value) -> bool:
    return value.is_tensor and value.dtype.is_numeric


@arg_filter
def nonscalar_numeric_tensor(value: Value) -> bool:
    return value.is_tensor and value.dtype.is_numeric and value.payload.ndim >= 1


@arg_filter
def matrix_or_more(value: Value) -> bool:
    return value.is_tensor and value.payload.ndim >= 2


@arg_filter
def numeric_matrix_or_more(value: Value) -> bool:
    return value.is_tensor and value.dtype.is_numeric and value.payload.ndim >= 2


@arg_filter
def int_tensor(value: Value) -> bool:
    return value.is_tensor and value.dtype.is_integer


@arg_filter
def nonneg_int_tensor(value: Value) -> bool:
    return value.is_tensor and value.dtype.is_integer and bool(np.all(value.payload >= 0))


@arg_filter
def int_vector(value: Value) -> bool:
    return is_int_vector(value)


@arg_filter
def nonneg_int_vector(value: Value) -> bool:
    return is_int_vector(value) and bool(np.all(value.payload >= 0))


@arg_filter
def bool_tensor(value: Value) -> bool:
    return value.is_tensor and value.dtype is DType.BOOL


@arg_filter
def nonscalar_bool_tensor(value: Value) -> bool:
    return value.is_tensor and value.dtype is DType.BOOL and value.payload.ndim >= 1


@arg_filter
def vector(value: Value) -> bool:
    return value.is_tensor and value.payload.ndim == 1


@arg_filter
def numeric_operand(value: Value) -> bool:
    """Numeric tensor, or an int/float primitive that will be broadcast."""
    if value.is_tensor:
        return value.dtype.is_numeric
    return value.kind in (Kind.INT, Kind.FLOAT)


@arg_filter
def any_operand(value: Value) -> bool:
    return value.is_tensor or value.is_primitive


@arg_filter
def scalar_operand(value: Value) -> bool:
    """A primitive number or boolean, or a rank-0 tensor."""
    if value.is_tensor:
        return value.payload.ndim == 0
    return value.is_primitive


@arg_filter
def scalar_int(value: Value) -> bool:
    if value.is_tensor:
        return value.payload.ndim == 0 and value.dtype.is_integer
    return value.is_int


@arg_filter
def axis(value: Value) -> bool:
    return value.is_int and -MAX_RANK <= value.payload <= MAX_RANK


@arg_filter
def int_primitive(value: Value) -> bool:
    return value.is_int


@arg_filter
def nonneg_int(value: Value) -> bool:
    return value.is_int and value.payload >= 0


@arg_filter
def positive_int(value: Value) -> bool:
    return value.is_int and value.payload > 0


@arg_filter
def dtype_literal(value: Value) -> bool:
    return value.kind is Kind.DTYPE


@arg_filter
def shape(value: Value) -> bool:
    """Tuple of positive ints or 1-D int tensor of positive entries."""
    if value.kind is Kind.TUPLE:
        return bool(value.payload) and all(m.is_int and m.payload > 0 for m in value.payload)
    return is_int_vector(value) and value.payload.size > 0 and bool(np.all(value.payload > 0))


@arg_filter
def reshape_shape(value: Value) -> bool:
    """Like ``shape`` but one entry may be -1."""
    if value.kind is Kind.TUPLE:
        if not value.payload or not all(m.is_int for m in value.payload):
            return False
        dims = [m.payload for m in value.payload]
    elif is_int_vector(value) and value.payload.size > 0:
        dims = value.payload.tolist()
    else:
        return False
    return all(d > 0 or d == -1 for d in dims) and dims.count(-1) <= 1


@arg_filter
def permutation(value: Value) -> bool:
    if value.kind is not Kind.TUPLE or not all(m.is_int for m in value.payload):
        return False
    perm = sorted(m.payload for m in value.payload)
    return len(perm) >= 2 and perm == list(range(len(perm)))


@arg_filter
def axes(value: Value) -> bool:
    """Tuple of ints or 1-D int tensor naming distinct axes."""
    if value.kind is Kind.TUPLE:
        if not all(m.is_int for m in value.payload):
            return False
    elif not is_int_vector(value):
        return False
    items = int_sequence(value)
    return 0 < len(items) <= MAX_RANK and len(set(items)) == len(items)


@arg_filter
def indices(value: Value) -> bool:
    """Integer tensor or tuple of small ints usable as gather indices."""
    if value.kind is Kind.TUPLE:
        return all(m.is_int and abs(m.payload) < 2**31 for m in value.payload)
    return value.is_tensor and value.dtype.is_integer


@arg_filter
def tensor_tuple(value: Value) -> bool:
    return value.kind is Kind.TUPLE and all(m.is_tensor for m in value.payload)


@arg_filter
def tuple_member(value: Value) -> bool:
    return value.is_tensor or value.is_int


@arg_filter
def constant_source(value: Value) -> bool:
    """Primitives and tuples of ints, which tf.constant turns into tensors."""
    if value.kind is Kind.TUPLE:
        return all(m.is_int for m in value.payload)
    return value.is_primitive


@arg_filter
def paddings(value: Value) -> bool:
    if not (value.is_tensor and value.dtype.is_integer):
        return False
    array = value.payload
    return array.ndim == 2 and array.shape[1] == 2 and bool(np.all(array >= 0))


# ---- Combination filters ----
def compatible_operands(values: Sequence[Value]) -> bool:
    tensors = [v for v in values if v.is_tensor]
    if not tensors:
        return False
    dtypes = {v.dtype for v in tensors}
    if len(dtypes) != 1:
        return False
    (dtype,) = dtypes
    for v in values:
        if v.is_tensor:
            continue
        if v.kind is Kind.FLOAT and not dtype.is_float:
            return False
        if v.kind is Kind.BOOL and dtype is not DType.BOOL:
            return False
        if v.kind in (Kind.INT, Kind.FLOAT) and dtype is DType.BOOL:
            return False
    return can_broadcast(*(v.payload.shape for v in tensors))


@combination_filter
def broadcastable_operands(args: Sequence[Value]) -> bool:
    """At least one tensor, agreeing dtypes and broadcastable shapes."""
    return compatible_operands(args)


@combination_filter
def axis_in_tensor(args: Sequence[Value]) -> bool:
    """args[1] is a valid axis of the tensor args[0]."""
    return axis_in_range(args[1].payload, args[0].payload.ndim)


@combination_filter
def nonempty_axis_in_tensor(args: Sequence[Value]) -> bool:
    array = args[0].payload
    ax = args[1].payload
    return axis_in_range(ax, array.ndim) and array.shape[ax] > 0


@combination_filter
def same_dtype(args: Sequence[Value]) -> bool:
    return len({v.dtype for v in args if v.is_tensor}) == 1
