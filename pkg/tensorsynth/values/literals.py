"""The JSON literal form of values, shared by task, dataset and test-vector files.

Bare JSON numbers, booleans and nested arrays are tensors: integers default to
``i32``, anything with a decimal point to ``f32`` and ``true``/``false`` to
``bool``. A wrapper object selects the dtype explicitly::

    {"dtype": "i64", "data": [[1, 2], [3, 4]]}

Empty tensors also carry their shape, since nested lists cannot express it::

    {"dtype": "f32", "shape": [0, 3], "data": []}

Non-tensor values use single-key wrappers: ``{"int": 3}``, ``{"float": 0.5}``,
``{"bool": true}``, ``{"dtype_literal": "int32"}`` and ``{"tuple": [...]}``.
"""

from typing import Any, List

import numpy as np

from .dtypes import DType
from .value import ELEMENT, Kind, Origin, Value

INT32_MIN = -(2**31)
INT32_MAX = 2**31 - 1


def from_literal(obj: Any, origin: Origin = ELEMENT, weight=None, scalars_as_primitives: bool = False) -> Value:
    """Build a value from its JSON literal.

    Args:
        obj: the decoded JSON object
        origin: origin given to the resulting leaf
        weight: leaf weight, if any
        scalars_as_primitives: read bare numbers and booleans as primitives
            instead of rank-0 tensors (used for task constants)

    Raises:
        ValueError: when the literal is malformed
    """
    kwargs = {"weight": weight}
    if isinstance(obj, dict):
        return _from_wrapper(obj, origin, kwargs)
    if scalars_as_primitives and not isinstance(obj, list):
        return _primitive(obj, origin, kwargs)
    return Value(Kind.TENSOR, _array(obj, None), origin, **kwargs)


def _from_wrapper(obj: dict, origin: Origin, kwargs) -> Value:
    if "data" in obj:
        unknown = set(obj) - {"dtype", "shape", "data"}
        if unknown:
            raise ValueError(f"unexpected keys in tensor literal: {sorted(unknown)}")
        dtype = DType.from_name(str(obj["dtype"])) if "dtype" in obj else None
        array = _array(obj["data"], dtype)
        if "shape" in obj:
            array = _reshape(array, obj["shape"])
        return Value(Kind.TENSOR, array, origin, **kwargs)
    if len(obj) != 1:
        raise ValueError(f"cannot read literal object with keys {sorted(obj)}")
    ((key, body),) = obj.items()
    if key == "int":
        if isinstance(body, bool) or not isinstance(body, int):
            raise ValueError(f"expected an integer, got {body!r}")
        return Value.of_int(body, origin, **kwargs)
    if key == "float":
        if isinstance(body, bool) or not isinstance(body, (int, float)):
            raise ValueError(f"expected a number, got {body!r}")
        return Value.of_float(body, origin, **kwargs)
    if key == "bool":
        if not isinstance(body, bool):
            raise ValueError(f"expected true or false, got {body!r}")
        return Value.of_bool(body, origin, **kwargs)
    if key == "dtype_literal":
        return Value.of_dtype(DType.from_name(str(body)), origin, **kwargs)
    if key == "tuple":
        if not isinstance(body, list):
            raise ValueError("tuple literal must hold a list")
        members = [from_literal(member, scalars_as_primitives=True) for member in body]
        return Value.of_tuple(members, origin, **kwargs)
    raise ValueError(f"unknown literal wrapper {key!r}")


def _reshape(array: np.ndarray, shape) -> np.ndarray:
    if not isinstance(shape, list) or any(isinstance(d, bool) or not isinstance(d, int) or d < 0 for d in shape):
        raise ValueError(f"shape must be a list of non-negative integers, got {shape!r}")
    try:
        return array.reshape(shape)
    except ValueError:
        raise ValueError(f"{array.size} elements do not fit shape {shape}")


def _primitive(obj, origin: Origin, kwargs) -> Value:
    if isinstance(obj, bool):
        return Value.of_bool(obj, origin, **kwargs)
    if isinstance(obj, int):
        return Value.of_int(obj, origin, **kwargs)
    if isinstance(obj, float):
        return Value.of_float(obj, origin, **kwargs)
    raise ValueError(f"cannot read {obj!r} as a constant")


def _leaves(obj) -> List[Any]:
    if isinstance(obj, list):
        return [leaf for item in obj for leaf in _leaves(item)]
    return [obj]


def _infer_dtype(leaves) -> DType:
    if not leaves:
        return DType.F32
    if all(isinstance(leaf, bool) for leaf in leaves):
        return DType.BOOL
    if any(isinstance(leaf, bool) for leaf in leaves):
        raise ValueError("booleans cannot be mixed with numbers in one tensor")
    for leaf in leaves:
        if not isinstance(leaf, (int, float)):
            raise ValueError(f"unsupported tensor element {leaf!r}")
    if any(isinstance(leaf, float) for leaf in leaves):
        return DType.F32
    return DType.I32


def _array(data, dtype) -> np.ndarray:
    leaves = _leaves(data)
    if dtype is None:
        dtype = _infer_dtype(leaves)
    if dtype.is_integer:
        for leaf in leaves:
            if isinstance(leaf, float) and not leaf.is_integer():
                raise ValueError(f"{leaf!r} is not an integer")
    if dtype is DType.I32 and any(not INT32_MIN <= int(leaf) <= INT32_MAX for leaf in leaves):
        raise ValueError('integer out of int32 range, use {"dtype": "i64", ...}')
    try:
        return np.array(data, dtype=dtype.np_dtype)
    except (ValueError, TypeError, OverflowError) as e:
        raise ValueError(f"malformed tensor data: {e}")


def to_literal(value: Value) -> Any:
    """JSON-compatible literal for a value; tensors always use the dtype wrapper."""
    kind = value.kind
    if kind is Kind.TENSOR:
        if 0 in value.shape:
            return {"dtype": value.dtype.short_name, "shape": list(value.shape), "data": []}
        return {"dtype": value.dtype.short_name, "data": tensor_data(value.payload)}
    if kind is Kind.INT:
        return {"int": value.payload}
    if kind is Kind.FLOAT:
        return {"float": value.payload}
    if kind is Kind.BOOL:
        return {"bool": value.payload}
    if kind is Kind.DTYPE:
        return {"dtype_literal": value.payload.value}
    return {"tuple": [to_literal(member) for member in value.payload]}


def tensor_data(array: np.ndarray) -> Any:
    """Nested Python lists for an array; float32 elements use their shortest repr."""
    if array.dtype.kind != "f":
        return array.tolist()
    flat = [float(str(x)) for x in array.ravel()]
    return _nest(flat, array.shape)


def _nest(flat: list, shape) -> Any:
    if not shape:
        return flat[0]
    if len(shape) == 1:
        return flat
    step = len(flat) // shape[0] if shape[0] else 0
    return [_nest(flat[i * step : (i + 1) * step], shape[1:]) for i in range(shape[0])]
