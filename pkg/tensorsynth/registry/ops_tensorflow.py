"""Dense TensorFlow operations.

Executors receive :class:`~tensorsynth.values.value.Value` arguments that have
passed the operation's filters and return a numpy array (or a tuple of values
for multi-output operations). Result dtypes follow TensorFlow.
"""

import numpy as np

from ..exceptions import OpError, OpErrorKind
from ..values.dtypes import DType
from ..values.shapes import broadcast_all, broadcast_shapes, can_broadcast
from ..values.value import ELEMENT, Kind, Value
from . import filters as f
from .filters import combination_filter, int_sequence, scalar_number
from .kernels import (
    ensure_fits,
    exact,
    int_checked,
    integer_op,
    lowest,
    normalize_axis,
    operand_arrays,
    precondition,
    scalar_array,
    widen,
)
from .operation import OperationCatalog

catalog = OperationCatalog()
operation = catalog.operation


# ---- Combination filters specific to single operations ----
@combination_filter
def distinct_dtype(args):
    return args[0].dtype is not args[1].payload


@combination_filter
def clip_bounds(args):
    t, lo, hi = args
    if not f.compatible_operands([t, lo]) or not f.compatible_operands([t, hi]):
        return False
    return scalar_number(lo) <= scalar_number(hi)


@combination_filter
def reshape_compatible(args):
    t, target = args
    dims = int_sequence(target)
    size = t.payload.size
    known = int(np.prod([d for d in dims if d != -1]))
    if -1 in dims:
        return known > 0 and size % known == 0
    return known == size


@combination_filter
def expand_axis_in_range(args):
    return f.axis_in_range(args[1].payload, args[0].payload.ndim, extra=1)


@combination_filter
def has_unit_dim(args):
    return 1 in args[0].payload.shape


@combination_filter
def unit_axis(args):
    array, ax = args[0].payload, args[1].payload
    return f.axis_in_range(ax, array.ndim) and array.shape[ax] == 1


@combination_filter
def permutation_of_rank(args):
    perm = int_sequence(args[1])
    return len(perm) == args[0].payload.ndim and perm != sorted(perm)


@combination_filter
def concat_compatible(args):
    members, ax = args[0].payload, args[1].payload
    if not members or len({m.dtype for m in members}) != 1:
        return False
    ranks = {m.payload.ndim for m in members}
    if len(ranks) != 1:
        return False
    (rank,) = ranks
    if rank == 0 or not f.axis_in_range(ax, rank):
        return False
    ax %= rank
    rest = {m.payload.shape[:ax] + m.payload.shape[ax + 1 :] for m in members}
    return len(rest) == 1


@combination_filter
def stack_compatible(args):
    members, ax = args[0].payload, args[1].payload
    if not members or len({m.dtype for m in members}) != 1:
        return False
    shapes = {m.payload.shape for m in members}
    if len(shapes) != 1:
        return False
    (shape,) = shapes
    return f.axis_in_range(ax, len(shape), extra=1)


@combination_filter
def unstack_compatible(args):
    array, ax = args[0].payload, args[1].payload
    return f.axis_in_range(ax, array.ndim) and 1 <= array.shape[ax] <= 4


@combination_filter
def multiples_match_rank(args):
    return len(int_sequence(args[1])) == args[0].payload.ndim


@combination_filter
def broadcast_target(args):
    source, target = args[0].payload.shape, tuple(int_sequence(args[1]))
    if source == target:
        return False
    return can_broadcast(source, target) and broadcast_shapes(source, target) == target


def _gather_indices(value: Value) -> np.ndarray:
    if value.kind is Kind.TUPLE:
        return np.array(int_sequence(value), dtype=np.int32)
    return value.payload


@combination_filter
def gather_in_range(args):
    idx = _gather_indices(args[1])
    return bool(np.all((idx >= 0) & (idx < args[0].payload.shape[0])))


@combination_filter
def batched_gather_valid(args):
    params, idx = args[0].payload, _gather_indices(args[1])
    ax, batch = args[2].payload, args[3].payload
    if not f.axis_in_range(ax, params.ndim):
        return False
    ax %= params.ndim
    if batch > ax or batch > idx.ndim or params.shape[:batch] != idx.shape[:batch]:
        return False
    return bool(np.all((idx >= 0) & (idx < params.shape[ax])))


@combination_filter
def gather_nd_valid(args):
    params, idx = args[0].payload, args[1].payload
    if idx.ndim < 1:
        return False
    depth = idx.shape[-1]
    if not 1 <= depth <= params.ndim:
        return False
    bounds = np.array(params.shape[:depth])
    return bool(np.all((idx >= 0) & (idx < bounds)))


@combination_filter
def mask_matches(args):
    array, mask = args[0].payload, args[1].payload
    return mask.shape == array.shape[: mask.ndim]


@combination_filter
def k_within_last_axis(args):
    return args[1].payload <= args[0].payload.shape[-1]


@combination_filter
def searchsorted_compatible(args):
    seq, values = args[0], args[1]
    if seq.dtype is not values.dtype:
        return False
    a, b = seq.payload, values.payload
    if a.ndim != b.ndim or a.shape[:-1] != b.shape[:-1]:
        return False
    return bool(np.all(a[..., 1:] >= a[..., :-1]))


@combination_filter
def nonzero_delta(args):
    return scalar_number(args[2]) != 0


@combination_filter
def sorted_segments(args):
    data, ids = args[0].payload, args[1].payload
    if ids.shape[0] != data.shape[0] or ids.size == 0:
        return False
    return bool(np.all(ids >= 0) and np.all(ids[1:] >= ids[:-1]))


@combination_filter
def unsorted_segments(args):
    data, ids, num = args[0].payload, args[1].payload, scalar_number(args[2])
    if ids.ndim < 1 or ids.shape != data.shape[: ids.ndim] or num <= 0:
        return False
    return bool(np.all(ids < num))


@combination_filter
def paddings_match_rank(args):
    return args[1].payload.shape[0] == args[0].payload.ndim


@combination_filter
def reflect_paddings(args):
    array, pads = args[0].payload, args[1].payload
    if pads.shape[0] != array.ndim:
        return False
    return all(int(p.max()) <= dim - 1 for p, dim in zip(pads, array.shape))


@combination_filter
def where_operands(args):
    cond, x, y = args
    if x.dtype is not y.dtype:
        return False
    return can_broadcast(cond.payload.shape, x.payload.shape, y.payload.shape)


@combination_filter
def matmul_compatible(args):
    a, b = args
    if a.dtype is not b.dtype:
        return False
    x, y = a.payload.shape, b.payload.shape
    return x[-1] == y[-2] and can_broadcast(x[:-2], y[:-2])


@combination_filter
def tensordot_compatible(args):
    a, b, n = args[0], args[1], args[2].payload
    if a.dtype is not b.dtype:
        return False
    x, y = a.payload.shape, b.payload.shape
    if n > len(x) or n > len(y):
        return False
    return x[len(x) - n :] == y[:n] and len(x) + len(y) - 2 * n <= 4


@combination_filter
def roll_valid(args):
    array, ax = args[0].payload, args[2].payload
    if not f.axis_in_range(ax, array.ndim):
        return False
    dim = array.shape[ax]
    return dim > 0 and args[1].payload % dim != 0


@combination_filter
def reverse_axes_valid(args):
    rank = args[0].payload.ndim
    items = int_sequence(args[1])
    if not all(f.axis_in_range(a, rank) for a in items):
        return False
    return len({a % rank for a in items}) == len(items)


# ---- Elementwise arithmetic and comparison ----
def _binary(func, a: Value, b: Value) -> np.ndarray:
    x, y = operand_arrays(a, b)
    ensure_fits(broadcast_shapes(x.shape, y.shape))
    if x.dtype.kind == "i":
        return integer_op(func, x, y)
    return func(x, y)


@operation("add", [f.numeric_operand, f.numeric_operand], "tf.add({0}, {1})", f.broadcastable_operands)
def add(a, b):
    return _binary(np.add, a, b)


@operation(
    "subtract", [f.numeric_operand, f.numeric_operand], "tf.subtract({0}, {1})", f.broadcastable_operands
)
def subtract(a, b):
    return _binary(np.subtract, a, b)


@operation(
    "multiply", [f.numeric_operand, f.numeric_operand], "tf.multiply({0}, {1})", f.broadcastable_operands
)
def multiply(a, b):
    return _binary(np.multiply, a, b)


@operation("divide", [f.numeric_operand, f.numeric_operand], "tf.divide({0}, {1})", f.broadcastable_operands)
def divide(a, b):
    x, y = operand_arrays(a, b)
    ensure_fits(broadcast_shapes(x.shape, y.shape))
    if x.dtype.kind == "i":
        return (x.astype(np.float64) / y.astype(np.float64)).astype(np.float32)
    return np.divide(x, y)


@operation(
    "maximum", [f.numeric_operand, f.numeric_operand], "tf.maximum({0}, {1})", f.broadcastable_operands
)
def maximum(a, b):
    return _binary(np.maximum, a, b)


@operation(
    "minimum", [f.numeric_operand, f.numeric_operand], "tf.minimum({0}, {1})", f.broadcastable_operands
)
def minimum(a, b):
    return _binary(np.minimum, a, b)


def _compare(func, a: Value, b: Value) -> np.ndarray:
    x, y = operand_arrays(a, b)
    ensure_fits(broadcast_shapes(x.shape, y.shape))
    return func(x, y)


@operation(
    "greater", [f.numeric_operand, f.numeric_operand], "tf.greater({0}, {1})", f.broadcastable_operands
)
def greater(a, b):
    return _compare(np.greater, a, b)


@operation(
    "greater_equal",
    [f.numeric_operand, f.numeric_operand],
    "tf.greater_equal({0}, {1})",
    f.broadcastable_operands,
)
def greater_equal(a, b):
    return _compare(np.greater_equal, a, b)


@operation("equal", [f.any_operand, f.any_operand], "tf.equal({0}, {1})", f.broadcastable_operands)
def equal(a, b):
    return _compare(np.equal, a, b)


@operation("not_equal", [f.any_operand, f.any_operand], "tf.not_equal({0}, {1})", f.broadcastable_operands)
def not_equal(a, b):
    return _compare(np.not_equal, a, b)


# ---- Unary ----
@operation("abs", [f.numeric_tensor], "tf.abs({0})")
def abs_(x):
    array = x.payload
    if array.dtype.kind == "i":
        return integer_op(np.abs, array)
    return np.abs(array)


@operation("square", [f.numeric_tensor], "tf.square({0})")
def square(x):
    array = x.payload
    if array.dtype.kind == "i":
        return integer_op(np.multiply, array, array)
    return np.square(array)


@operation("sign", [f.numeric_tensor], "tf.sign({0})")
def sign(x):
    return np.sign(x.payload)


@operation("negative", [f.numeric_tensor], "tf.math.negative({0})")
def negative(x):
    array = x.payload
    if array.dtype.kind == "i":
        return integer_op(np.negative, array)
    return np.negative(array)


@operation("cast", [f.tensor, f.dtype_literal], "tf.cast({0}, {1})", distinct_dtype)
def cast(x, dtype):
    array, target = x.payload, dtype.payload
    precondition(x.dtype is not target, "cast to the same dtype")
    if target is DType.BOOL:
        return array != 0
    if target.is_integer and array.dtype.kind == "f":
        if not np.all(np.isfinite(array)):
            raise OpError(OpErrorKind.NUMERIC_ERROR, "cannot cast non-finite floats to integers")
        return int_checked(np.trunc(array.astype(np.float64)).astype(object), target.np_dtype)
    if target.is_integer and array.dtype.kind == "i":
        return int_checked(array, target.np_dtype)
    return array.astype(target.np_dtype)


@operation(
    "clip_by_value",
    [f.numeric_tensor, f.scalar_operand, f.scalar_operand],
    "tf.clip_by_value({0}, {1}, {2})",
    clip_bounds,
)
def clip_by_value(t, lo, hi):
    array, low, high = operand_arrays(t, lo, hi)
    precondition(low <= high, "clip bounds out of order")
    return np.clip(array, low, high).astype(array.dtype)


# ---- Reductions ----
def _sum(array, axis=None):
    if array.dtype.kind == "i":
        return int_checked(np.sum(widen(array), axis=axis), array.dtype)
    return np.sum(array, axis=axis, dtype=array.dtype)


def _mean(array, axis=None):
    count = array.size if axis is None else array.shape[axis]
    precondition(count > 0, "mean of an empty tensor")
    if array.dtype.kind == "i":
        total = np.asarray(np.sum(widen(array), axis=axis))
        # integer mean truncates toward zero
        quotient = np.where(total < 0, -((-total) // count), total // count)
        return int_checked(quotient, array.dtype)
    return np.mean(array, axis=axis, dtype=array.dtype)


@operation("reduce_sum", [f.nonscalar_numeric_tensor], "tf.reduce_sum({0})")
def reduce_sum(x):
    return _sum(x.payload)


@operation(
    "reduce_sum_axis", [f.nonscalar_numeric_tensor, f.axis], "tf.reduce_sum({0}, axis={1})", f.axis_in_tensor
)
def reduce_sum_axis(x, ax):
    return _sum(x.payload, axis=normalize_axis(ax.payload, x.payload.ndim))


@operation("reduce_max", [f.nonscalar_numeric_tensor], "tf.reduce_max({0})")
def reduce_max(x):
    precondition(x.payload.size > 0, "max of an empty tensor")
    return np.max(x.payload)


@operation(
    "reduce_max_axis",
    [f.nonscalar_numeric_tensor, f.axis],
    "tf.reduce_max({0}, axis={1})",
    f.nonempty_axis_in_tensor,
)
def reduce_max_axis(x, ax):
    return np.max(x.payload, axis=normalize_axis(ax.payload, x.payload.ndim))


@operation("reduce_min", [f.nonscalar_numeric_tensor], "tf.reduce_min({0})")
def reduce_min(x):
    precondition(x.payload.size > 0, "min of an empty tensor")
    return np.min(x.payload)


@operation(
    "reduce_min_axis",
    [f.nonscalar_numeric_tensor, f.axis],
    "tf.reduce_min({0}, axis={1})",
    f.nonempty_axis_in_tensor,
)
def reduce_min_axis(x, ax):
    return np.min(x.payload, axis=normalize_axis(ax.payload, x.payload.ndim))


@operation("reduce_mean", [f.nonscalar_numeric_tensor], "tf.reduce_mean({0})")
def reduce_mean(x):
    return _mean(x.payload)


@operation(
    "reduce_mean_axis",
    [f.nonscalar_numeric_tensor, f.axis],
    "tf.reduce_mean({0}, axis={1})",
    f.nonempty_axis_in_tensor,
)
def reduce_mean_axis(x, ax):
    return _mean(x.payload, axis=normalize_axis(ax.payload, x.payload.ndim))


@operation(
    "reduce_prod_axis",
    [f.nonscalar_numeric_tensor, f.axis],
    "tf.reduce_prod({0}, axis={1})",
    f.axis_in_tensor,
)
def reduce_prod_axis(x, ax):
    array = x.payload
    axis = normalize_axis(ax.payload, array.ndim)
    if array.dtype.kind == "i":
        return integer_op(lambda a: np.prod(a, axis=axis), array, products=True)
    return np.prod(array, axis=axis, dtype=array.dtype)


@operation("reduce_any", [f.nonscalar_bool_tensor], "tf.reduce_any({0})")
def reduce_any(x):
    return np.any(x.payload)


@operation("reduce_any_axis", [f.nonscalar_bool_tensor, f.axis], "tf.reduce_any({0}, axis={1})", f.axis_in_tensor)
def reduce_any_axis(x, ax):
    return np.any(x.payload, axis=normalize_axis(ax.payload, x.payload.ndim))


@operation("count_nonzero", [f.nonscalar_tensor], "tf.math.count_nonzero({0})")
def count_nonzero(x):
    return np.array(np.count_nonzero(x.payload), dtype=np.int64)


@operation(
    "count_nonzero_axis",
    [f.nonscalar_tensor, f.axis],
    "tf.math.count_nonzero({0}, axis={1})",
    f.axis_in_tensor,
)
def count_nonzero_axis(x, ax):
    axis = normalize_axis(ax.payload, x.payload.ndim)
    return np.asarray(np.count_nonzero(x.payload, axis=axis)).astype(np.int64)


# ---- Shape manipulation ----
@operation("reshape", [f.tensor, f.reshape_shape], "tf.reshape({0}, {1})", reshape_compatible)
def reshape(t, target):
    dims = int_sequence(target)
    array = t.payload
    if -1 in dims:
        known = int(np.prod([d for d in dims if d != -1]))
        precondition(known > 0 and array.size % known == 0, "cannot infer reshape dimension")
        dims = [array.size // known if d == -1 else d for d in dims]
    precondition(int(np.prod(dims)) == array.size, "reshape changes the element count")
    ensure_fits(dims)
    return array.reshape(dims)


@operation("expand_dims", [f.tensor, f.axis], "tf.expand_dims({0}, axis={1})", expand_axis_in_range)
def expand_dims(t, ax):
    array = t.payload
    precondition(f.axis_in_range(ax.payload, array.ndim, extra=1), "axis out of range")
    ensure_fits(array.shape + (1,))
    return np.expand_dims(array, ax.payload)


@operation("squeeze", [f.nonscalar_tensor], "tf.squeeze({0})", has_unit_dim)
def squeeze(t):
    precondition(1 in t.payload.shape, "nothing to squeeze")
    return np.squeeze(t.payload)


@operation("squeeze_axis", [f.nonscalar_tensor, f.axis], "tf.squeeze({0}, axis={1})", unit_axis)
def squeeze_axis(t, ax):
    axis = normalize_axis(ax.payload, t.payload.ndim)
    precondition(t.payload.shape[axis] == 1, "squeezed axis is not of size 1")
    return np.squeeze(t.payload, axis=axis)


@operation("transpose", [f.matrix_or_more], "tf.transpose({0})")
def transpose(t):
    return np.transpose(t.payload)


@operation("transpose_perm", [f.matrix_or_more, f.permutation], "tf.transpose({0}, perm={1})", permutation_of_rank)
def transpose_perm(t, perm):
    order = int_sequence(perm)
    precondition(len(order) == t.payload.ndim, "permutation length differs from rank")
    return np.transpose(t.payload, order)


@operation("concat", [f.tensor_tuple, f.axis], "tf.concat({0}, axis={1})", concat_compatible)
def concat(values, ax):
    arrays = [m.payload for m in values.payload]
    axis = normalize_axis(ax.payload, arrays[0].ndim)
    shape = list(arrays[0].shape)
    shape[axis] = sum(a.shape[axis] for a in arrays)
    ensure_fits(shape)
    return np.concatenate(arrays, axis=axis)


@operation("stack", [f.tensor_tuple, f.axis], "tf.stack({0}, axis={1})", stack_compatible)
def stack(values, ax):
    arrays = [m.payload for m in values.payload]
    rank = arrays[0].ndim
    precondition(f.axis_in_range(ax.payload, rank, extra=1), "axis out of range")
    shape = list(arrays[0].shape)
    shape.insert(ax.payload % (rank + 1), len(arrays))
    ensure_fits(shape)
    return np.stack(arrays, axis=ax.payload)


@operation("unstack", [f.nonscalar_tensor, f.axis], "tf.unstack({0}, axis={1})", unstack_compatible)
def unstack(value, ax):
    array = value.payload
    axis = normalize_axis(ax.payload, array.ndim)
    precondition(1 <= array.shape[axis] <= 4, "too many pieces to unstack")
    return tuple(Value(Kind.TENSOR, np.asarray(np.take(array, i, axis=axis)), ELEMENT) for i in range(array.shape[axis]))


@operation("tile", [f.nonscalar_tensor, f.shape], "tf.tile({0}, {1})", multiples_match_rank)
def tile(t, multiples):
    reps = int_sequence(multiples)
    precondition(len(reps) == t.payload.ndim, "multiples length differs from rank")
    ensure_fits([d * r for d, r in zip(t.payload.shape, reps)])
    return np.tile(t.payload, reps)


@operation("broadcast_to", [f.tensor, f.shape], "tf.broadcast_to({0}, {1})", broadcast_target)
def broadcast_to(t, target):
    dims = tuple(int_sequence(target))
    precondition(broadcast_shapes(t.payload.shape, dims) == dims, "cannot broadcast to shape")
    ensure_fits(dims)
    return np.array(np.broadcast_to(t.payload, dims))


@operation("shape", [f.tensor], "tf.shape({0})")
def shape(t):
    return np.array(t.payload.shape, dtype=np.int32)


# ---- Gathering ----
def _batched_gather(params, idx, axis, batch_dims):
    if batch_dims == 0:
        return np.take(params, idx, axis=axis)
    parts = [_batched_gather(params[i], idx[i], axis - 1, batch_dims - 1) for i in range(params.shape[0])]
    precondition(bool(parts), "empty batch dimension")
    return np.stack(parts)


@operation("gather_2", [f.nonscalar_tensor, f.indices], "tf.gather({0}, {1})", gather_in_range)
def gather_2(params, indices):
    array, idx = params.payload, _gather_indices(indices)
    precondition(bool(np.all((idx >= 0) & (idx < array.shape[0]))), "gather index out of range")
    ensure_fits(idx.shape + array.shape[1:])
    return np.take(array, idx, axis=0)


@operation(
    "gather_4",
    [f.nonscalar_tensor, f.indices, f.axis, f.nonneg_int],
    "tf.gather({0}, {1}, axis={2}, batch_dims={3})",
    batched_gather_valid,
)
def gather_4(params, indices, ax, batch):
    array, idx = params.payload, _gather_indices(indices)
    axis = normalize_axis(ax.payload, array.ndim)
    batch_dims = batch.payload
    precondition(batch_dims <= axis and batch_dims <= idx.ndim, "batch_dims too large")
    precondition(array.shape[:batch_dims] == idx.shape[:batch_dims], "batch dimensions differ")
    precondition(bool(np.all((idx >= 0) & (idx < array.shape[axis]))), "gather index out of range")
    ensure_fits(array.shape[:axis] + idx.shape[batch_dims:] + array.shape[axis + 1 :])
    return _batched_gather(array, idx, axis, batch_dims)


@operation("gather_nd", [f.nonscalar_tensor, f.int_tensor], "tf.gather_nd({0}, {1})", gather_nd_valid)
def gather_nd(params, indices):
    array, idx = params.payload, indices.payload
    precondition(idx.ndim >= 1 and 1 <= idx.shape[-1] <= array.ndim, "bad index depth")
    ensure_fits(idx.shape[:-1] + array.shape[idx.shape[-1] :])
    return array[tuple(np.moveaxis(idx, -1, 0))]


@operation(
    "boolean_mask", [f.nonscalar_tensor, f.nonscalar_bool_tensor], "tf.boolean_mask({0}, {1})", mask_matches
)
def boolean_mask(t, mask):
    precondition(mask.payload.shape == t.payload.shape[: mask.payload.ndim], "mask shape mismatch")
    return t.payload[mask.payload]


# ---- Sorting and searching ----
@operation("sort", [f.nonscalar_numeric_tensor, f.axis], "tf.sort({0}, axis={1})", f.axis_in_tensor)
def sort(values, ax):
    return np.sort(values.payload, axis=normalize_axis(ax.payload, values.payload.ndim), kind="stable")


@operation(
    "sort_desc",
    [f.nonscalar_numeric_tensor, f.axis],
    "tf.sort({0}, axis={1}, direction='DESCENDING')",
    f.axis_in_tensor,
)
def sort_desc(values, ax):
    axis = normalize_axis(ax.payload, values.payload.ndim)
    return np.flip(np.sort(values.payload, axis=axis, kind="stable"), axis=axis)


@operation(
    "argsort_stable",
    [f.nonscalar_numeric_tensor, f.axis],
    "tf.argsort({0}, axis={1}, stable=True)",
    f.axis_in_tensor,
)
def argsort_stable(values, ax):
    axis = normalize_axis(ax.payload, values.payload.ndim)
    return np.argsort(values.payload, axis=axis, kind="stable").astype(np.int32)


@operation(
    "argsort_desc_stable",
    [f.nonscalar_numeric_tensor, f.axis],
    "tf.argsort({0}, axis={1}, direction='DESCENDING', stable=True)",
    f.axis_in_tensor,
)
def argsort_desc_stable(values, ax):
    array = values.payload
    axis = normalize_axis(ax.payload, array.ndim)
    # ~x reverses integer order without overflowing at the minimum value
    keys = np.invert(array) if array.dtype.kind == "i" else np.negative(array)
    return np.argsort(keys, axis=axis, kind="stable").astype(np.int32)


@operation("argmax", [f.nonscalar_numeric_tensor, f.axis], "tf.argmax({0}, axis={1})", f.nonempty_axis_in_tensor)
def argmax(values, ax):
    axis = normalize_axis(ax.payload, values.payload.ndim)
    return np.asarray(np.argmax(values.payload, axis=axis)).astype(np.int64)


@operation("argmin", [f.nonscalar_numeric_tensor, f.axis], "tf.argmin({0}, axis={1})", f.nonempty_axis_in_tensor)
def argmin(values, ax):
    axis = normalize_axis(ax.payload, values.payload.ndim)
    return np.asarray(np.argmin(values.payload, axis=axis)).astype(np.int64)


@operation("top_k", [f.nonscalar_numeric_tensor, f.positive_int], "tf.math.top_k({0}, k={1}).values", k_within_last_axis)
def top_k(values, k):
    array = values.payload
    precondition(k.payload <= array.shape[-1], "k larger than the last dimension")
    return np.flip(np.sort(array, axis=-1, kind="stable"), axis=-1)[..., : k.payload]


def _searchsorted(seq: Value, values: Value, side: str) -> np.ndarray:
    a, b = seq.payload, values.payload
    precondition(a.ndim == b.ndim and a.shape[:-1] == b.shape[:-1], "leading dimensions differ")
    rows_a = a.reshape(-1, a.shape[-1])
    rows_b = b.reshape(-1, b.shape[-1])
    precondition(rows_a.shape[0] > 0, "empty batch")
    result = np.stack([np.searchsorted(row_a, row_b, side=side) for row_a, row_b in zip(rows_a, rows_b)])
    return result.reshape(b.shape).astype(np.int32)


@operation(
    "searchsorted_left",
    [f.nonscalar_numeric_tensor, f.nonscalar_numeric_tensor],
    "tf.searchsorted({0}, {1}, side='left')",
    searchsorted_compatible,
)
def searchsorted_left(seq, values):
    return _searchsorted(seq, values, "left")


@operation(
    "searchsorted_right",
    [f.nonscalar_numeric_tensor, f.nonscalar_numeric_tensor],
    "tf.searchsorted({0}, {1}, side='right')",
    searchsorted_compatible,
)
def searchsorted_right(seq, values):
    return _searchsorted(seq, values, "right")


# ---- Construction ----
@operation("constant", [f.constant_source], "tf.constant({0})")
def constant(value):
    if value.kind is Kind.TUPLE:
        return int_checked(np.array(int_sequence(value), dtype=object), np.int32)
    return scalar_array(value)


@operation("zeros", [f.shape], "tf.zeros({0})")
def zeros(dims):
    target = int_sequence(dims)
    ensure_fits(target)
    return np.zeros(target, dtype=np.float32)


@operation("ones", [f.shape], "tf.ones({0})")
def ones(dims):
    target = int_sequence(dims)
    ensure_fits(target)
    return np.ones(target, dtype=np.float32)


@operation("zeros_like", [f.tensor], "tf.zeros_like({0})")
def zeros_like(t):
    return np.zeros_like(t.payload)


@operation("ones_like", [f.tensor], "tf.ones_like({0})")
def ones_like(t):
    return np.ones_like(t.payload)


@operation("fill", [f.shape, f.scalar_operand], "tf.fill({0}, {1})")
def fill(dims, value):
    target = int_sequence(dims)
    ensure_fits(target)
    element = scalar_array(value)
    return np.full(target, element, dtype=element.dtype)


@operation("eye", [f.positive_int], "tf.eye({0})")
def eye(num_rows):
    n = num_rows.payload
    ensure_fits((n, n))
    return np.eye(n, dtype=np.float32)


def _range_dtype(*values: Value):
    if any(v.is_tensor and v.dtype is DType.I64 for v in values):
        return np.int64
    return np.int32


@operation("range_1", [f.scalar_int], "tf.range({0})")
def range_1(limit):
    n = int(scalar_number(limit))
    ensure_fits((max(n, 0),))
    return np.arange(n, dtype=_range_dtype(limit))


@operation("range_3", [f.scalar_int, f.scalar_int, f.scalar_int], "tf.range({0}, {1}, {2})", nonzero_delta)
def range_3(start, limit, delta):
    begin, end, step = (int(scalar_number(v)) for v in (start, limit, delta))
    precondition(step != 0, "range step is zero")
    length = max(0, -((begin - end) // step))
    ensure_fits((length,))
    dtype = _range_dtype(start, limit, delta)
    return int_checked(np.array(range(begin, end, step), dtype=object), dtype)


@operation("one_hot", [f.int_tensor, f.positive_int], "tf.one_hot({0}, {1})")
def one_hot(indices, depth):
    idx, n = indices.payload, depth.payload
    ensure_fits(idx.shape + (n,))
    return (idx[..., np.newaxis] == np.arange(n)).astype(np.float32)


def _sequence_mask(lengths: np.ndarray, width: int) -> np.ndarray:
    ensure_fits(lengths.shape + (width,))
    return np.arange(width) < lengths[..., np.newaxis]


@operation("sequence_mask", [f.nonneg_int_tensor], "tf.sequence_mask({0})")
def sequence_mask(lengths):
    array = lengths.payload
    width = int(array.max()) if array.size else 0
    return _sequence_mask(array, width)


@operation("sequence_mask_maxlen", [f.nonneg_int_tensor, f.nonneg_int], "tf.sequence_mask({0}, maxlen={1})")
def sequence_mask_maxlen(lengths, maxlen):
    return _sequence_mask(lengths.payload, maxlen.payload)


# ---- Segments and miscellaneous ----
@operation("bincount", [f.nonneg_int_tensor], "tf.math.bincount({0})")
def bincount(arr):
    flat = arr.payload.ravel()
    length = int(flat.max()) + 1 if flat.size else 0
    ensure_fits((length,))
    return np.bincount(flat, minlength=length).astype(np.int32)


@operation("unique_with_counts_index", [f.vector], "tf.unique_with_counts({0})[1]")
def unique_with_counts_index(x):
    array = x.payload
    if array.size == 0:
        return np.zeros(0, dtype=np.int32)
    _, first, inverse = np.unique(array, return_index=True, return_inverse=True)
    # ids follow order of first appearance, not sorted order
    order = np.argsort(first, kind="stable")
    ids = np.empty_like(order)
    ids[order] = np.arange(order.size)
    return ids[inverse.reshape(-1)].astype(np.int32)


def _segment_reduce(data, ids, num, kind: str, empty=None) -> np.ndarray:
    rest = data.shape[ids.ndim :]
    ensure_fits((num,) + rest)
    flat_ids = ids.ravel()
    flat_data = data.reshape((-1,) + rest)
    keep = flat_ids >= 0
    flat_ids, flat_data = flat_ids[keep], flat_data[keep]
    if kind == "sum":
        lifted = widen(flat_data)
        out = np.zeros((num,) + rest, dtype=lifted.dtype)
        np.add.at(out, flat_ids, lifted)
        if data.dtype.kind == "i":
            return int_checked(out, data.dtype)
        return out.astype(data.dtype)
    out = np.full((num,) + rest, lowest(data.dtype), dtype=data.dtype)
    np.maximum.at(out, flat_ids, flat_data)
    if empty is not None:
        present = np.zeros(num, dtype=bool)
        present[flat_ids] = True
        out[~present] = empty
    return out


@operation(
    "segment_sum", [f.nonscalar_numeric_tensor, f.nonneg_int_vector], "tf.math.segment_sum({0}, {1})", sorted_segments
)
def segment_sum(data, segment_ids):
    ids = segment_ids.payload
    precondition(ids.size > 0 and ids.shape[0] == data.payload.shape[0], "segment ids length mismatch")
    return _segment_reduce(data.payload, ids, int(ids.max()) + 1, "sum")


@operation(
    "segment_max", [f.nonscalar_numeric_tensor, f.nonneg_int_vector], "tf.math.segment_max({0}, {1})", sorted_segments
)
def segment_max(data, segment_ids):
    ids = segment_ids.payload
    precondition(ids.size > 0 and ids.shape[0] == data.payload.shape[0], "segment ids length mismatch")
    return _segment_reduce(data.payload, ids, int(ids.max()) + 1, "max", empty=0)


def _unsorted_args(data: Value, segment_ids: Value, num_segments: Value):
    array, ids = data.payload, segment_ids.payload
    num = int(scalar_number(num_segments))
    precondition(ids.ndim >= 1 and ids.shape == array.shape[: ids.ndim], "segment ids shape mismatch")
    precondition(num > 0 and bool(np.all(ids < num)), "segment id out of range")
    return array, ids, num


@operation(
    "unsorted_segment_sum",
    [f.nonscalar_numeric_tensor, f.int_tensor, f.scalar_int],
    "tf.math.unsorted_segment_sum({0}, {1}, {2})",
    unsorted_segments,
)
def unsorted_segment_sum(data, segment_ids, num_segments):
    return _segment_reduce(*_unsorted_args(data, segment_ids, num_segments), "sum")


@operation(
    "unsorted_segment_max",
    [f.nonscalar_numeric_tensor, f.int_tensor, f.scalar_int],
    "tf.math.unsorted_segment_max({0}, {1}, {2})",
    unsorted_segments,
)
def unsorted_segment_max(data, segment_ids, num_segments):
    return _segment_reduce(*_unsorted_args(data, segment_ids, num_segments), "max")


@operation("cumsum", [f.nonscalar_numeric_tensor, f.axis], "tf.math.cumsum({0}, axis={1})", f.axis_in_tensor)
def cumsum(x, ax):
    array = x.payload
    axis = normalize_axis(ax.payload, array.ndim)
    if array.dtype.kind == "i":
        return integer_op(lambda a: np.cumsum(a, axis=axis), array)
    return np.cumsum(array, axis=axis, dtype=array.dtype)


@operation(
    "cumsum_exclusive",
    [f.nonscalar_numeric_tensor, f.axis],
    "tf.math.cumsum({0}, axis={1}, exclusive=True)",
    f.axis_in_tensor,
)
def cumsum_exclusive(x, ax):
    array = x.payload
    axis = normalize_axis(ax.payload, array.ndim)
    n = array.shape[axis]
    if n == 0:
        return array.copy()
    head = np.zeros_like(np.take(array, [0], axis=axis))
    shifted = np.concatenate([head, np.take(array, range(n - 1), axis=axis)], axis=axis)
    if array.dtype.kind == "i":
        return integer_op(lambda a: np.cumsum(a, axis=axis), shifted)
    return np.cumsum(shifted, axis=axis, dtype=array.dtype)


def _padded_shape(array, pads):
    return [d + int(lo) + int(hi) for d, (lo, hi) in zip(array.shape, pads)]


@operation("pad_constant", [f.nonscalar_tensor, f.paddings], "tf.pad({0}, {1}, mode='CONSTANT')", paddings_match_rank)
def pad_constant(t, paddings):
    array, pads = t.payload, paddings.payload
    precondition(pads.shape[0] == array.ndim, "paddings rows differ from rank")
    ensure_fits(_padded_shape(array, pads))
    return np.pad(array, pads.tolist(), mode="constant")


@operation("pad_reflect", [f.nonscalar_tensor, f.paddings], "tf.pad({0}, {1}, mode='REFLECT')", reflect_paddings)
def pad_reflect(t, paddings):
    array, pads = t.payload, paddings.payload
    precondition(pads.shape[0] == array.ndim, "paddings rows differ from rank")
    precondition(
        all(int(p.max()) <= dim - 1 for p, dim in zip(pads, array.shape)), "reflect padding larger than dimension"
    )
    ensure_fits(_padded_shape(array, pads))
    return np.pad(array, pads.tolist(), mode="reflect")


@operation("where_1", [f.nonscalar_bool_tensor], "tf.where({0})")
def where_1(condition):
    return np.argwhere(condition.payload).astype(np.int64)


@operation("where_3", [f.bool_tensor, f.tensor, f.tensor], "tf.where({0}, {1}, {2})", where_operands)
def where_3(condition, x, y):
    precondition(x.dtype is y.dtype, "branches have different dtypes")
    ensure_fits(broadcast_all(condition.payload.shape, x.payload.shape, y.payload.shape))
    return np.where(condition.payload, x.payload, y.payload)


@operation(
    "matmul", [f.numeric_matrix_or_more, f.numeric_matrix_or_more], "tf.matmul({0}, {1})", matmul_compatible
)
def matmul(a, b):
    x, y = a.payload, b.payload
    precondition(x.dtype == y.dtype and x.shape[-1] == y.shape[-2], "incompatible matrices")
    ensure_fits(broadcast_shapes(x.shape[:-2], y.shape[:-2]) + (x.shape[-2], y.shape[-1]))
    if x.dtype.kind == "i":
        return integer_op(np.matmul, x, y, products=True)
    return np.matmul(x, y)


@operation(
    "tensordot", [f.numeric_tensor, f.numeric_tensor, f.nonneg_int], "tf.tensordot({0}, {1}, {2})", tensordot_compatible
)
def tensordot(a, b, axes):
    x, y, n = a.payload, b.payload, axes.payload
    precondition(x.dtype == y.dtype, "operands have different dtypes")
    precondition(n <= x.ndim and n <= y.ndim and x.shape[x.ndim - n :] == y.shape[:n], "contracted dims differ")
    ensure_fits(x.shape[: x.ndim - n] + y.shape[n:])
    if x.dtype.kind == "i":
        return int_checked(np.tensordot(exact(x), exact(y), axes=n), x.dtype)
    return np.tensordot(x, y, axes=n).astype(x.dtype)


@operation("roll", [f.nonscalar_tensor, f.int_primitive, f.axis], "tf.roll({0}, {1}, {2})", roll_valid)
def roll(t, shift, ax):
    axis = normalize_axis(ax.payload, t.payload.ndim)
    return np.roll(t.payload, shift.payload, axis=axis)


@operation("reverse", [f.nonscalar_tensor, f.axes], "tf.reverse({0}, {1})", reverse_axes_valid)
def reverse(t, axes):
    rank = t.payload.ndim
    items = tuple(normalize_axis(a, rank) for a in int_sequence(axes))
    precondition(len(set(items)) == len(items), "repeated axis")
    return np.flip(t.payload, axis=items)


TENSORFLOW_OPERATIONS = list(catalog)
