"""Array helpers shared by the operation executors."""

from math import prod
from typing import Sequence

import numpy as np

from ..exceptions import OpError, OpErrorKind
from ..values.compare import DEFAULT_LIMITS
from ..values.value import Kind, Value


def precondition(condition: bool, detail: str) -> None:
    if not condition:
        raise OpError(OpErrorKind.PRECONDITION_VIOLATED, detail)


def ensure_fits(shape: Sequence[int]) -> None:
    """Refuse to allocate a tensor that would exceed the size limits."""
    limits = DEFAULT_LIMITS
    shape = tuple(int(d) for d in shape)
    if (
        len(shape) > limits.max_rank
        or any(d > limits.max_dim for d in shape)
        or prod(shape) > limits.max_elements
    ):
        raise OpError(OpErrorKind.LIMIT_EXCEEDED, f"result shape {shape} is too large")


def widen(array: np.ndarray) -> np.ndarray:
    """Integer arrays in a type wide enough for one add or multiply."""
    if array.dtype == np.int32:
        return array.astype(np.int64)
    if array.dtype == np.int64:
        return array.astype(object)
    return array


def exact(array: np.ndarray) -> np.ndarray:
    """Integer arrays as Python ints, for products and dot products."""
    if array.dtype.kind == "i":
        return array.astype(object)
    return array


def int_checked(result, dtype) -> np.ndarray:
    """Convert an integer result back to ``dtype``, refusing to wrap around."""
    result = np.asarray(result)
    info = np.iinfo(dtype)
    if result.size and (result.min() < info.min or result.max() > info.max):
        raise OpError(OpErrorKind.NUMERIC_ERROR, f"integer overflow in {np.dtype(dtype).name}")
    return result.astype(dtype)


def integer_op(func, *arrays, products: bool = False) -> np.ndarray:
    """Apply ``func`` to integer arrays without silent overflow."""
    dtype = arrays[0].dtype
    lift = exact if products else widen
    return int_checked(func(*(lift(a) for a in arrays)), dtype)


def operand_arrays(*values: Value):
    """Arrays for a mix of tensors and primitives, primitives taking the tensor dtype."""
    dtype = next(v.payload.dtype for v in values if v.is_tensor)
    arrays = []
    for value in values:
        if value.is_tensor:
            arrays.append(value.payload)
            continue
        if dtype.kind == "i":
            info = np.iinfo(dtype)
            precondition(info.min <= value.payload <= info.max, "constant out of dtype range")
        arrays.append(np.array(value.payload, dtype=dtype))
    return arrays


def scalar_array(value: Value) -> np.ndarray:
    """Rank-0 array for a primitive or a rank-0 tensor."""
    if value.is_tensor:
        return value.payload
    if value.kind is Kind.BOOL:
        return np.array(value.payload, dtype=np.bool_)
    if value.kind is Kind.FLOAT:
        return np.array(value.payload, dtype=np.float32)
    info = np.iinfo(np.int32)
    precondition(info.min <= value.payload <= info.max, "integer constant out of int32 range")
    return np.array(value.payload, dtype=np.int32)


def normalize_axis(axis: int, rank: int) -> int:
    precondition(-rank <= axis < rank, f"axis {axis} out of range for rank {rank}")
    return axis % rank if rank else 0


def lowest(dtype) -> object:
    """Smallest finite value of a dtype."""
    if np.dtype(dtype).kind == "f":
        return np.finfo(dtype).min
    return np.iinfo(dtype).min
