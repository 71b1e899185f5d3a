"""Python-syntax operations: indexing, slicing and tuple construction."""

from . import filters as f
from .filters import combination_filter
from .kernels import precondition
from .operation import OperationCatalog

catalog = OperationCatalog()
operation = catalog.operation


@combination_filter
def index_in_axis0(args):
    n = args[0].payload.shape[0]
    return -n <= args[1].payload < n


@combination_filter
def index_in_axis1(args):
    n = args[0].payload.shape[1]
    return -n <= args[1].payload < n


@combination_filter
def homogeneous_members(args):
    """Tuples hold either only tensors or only ints."""
    return all(a.is_tensor for a in args) or all(a.is_int for a in args)


@operation("indexing", [f.nonscalar_tensor, f.int_primitive], "{0}[{1}]", index_in_axis0)
def indexing(arg1, arg2):
    n = arg1.payload.shape[0]
    precondition(-n <= arg2.payload < n, "index out of range")
    return arg1.payload[arg2.payload]


@operation("indexing_axis1", [f.matrix_or_more, f.int_primitive], "{0}[:, {1}]", index_in_axis1)
def indexing_axis1(arg1, arg2):
    n = arg1.payload.shape[1]
    precondition(-n <= arg2.payload < n, "index out of range")
    return arg1.payload[:, arg2.payload]


@operation("pair", [f.tuple_member, f.tuple_member], "({0}, {1})", homogeneous_members)
def pair(arg1, arg2):
    return (arg1, arg2)


@operation("singleton", [f.tuple_member], "({0},)")
def singleton(arg1):
    return (arg1,)


@operation("triple", [f.tuple_member, f.tuple_member, f.tuple_member], "({0}, {1}, {2})", homogeneous_members)
def triple(arg1, arg2, arg3):
    return (arg1, arg2, arg3)


@operation("slicing_axis0_both", [f.nonscalar_tensor, f.int_primitive, f.int_primitive], "{0}[{1}:{2}]")
def slicing_axis0_both(arg1, arg2, arg3):
    return arg1.payload[arg2.payload : arg3.payload]


@operation("slicing_axis0_left", [f.nonscalar_tensor, f.int_primitive], "{0}[{1}:]")
def slicing_axis0_left(arg1, arg2):
    return arg1.payload[arg2.payload :]


@operation("slicing_axis0_right", [f.nonscalar_tensor, f.int_primitive], "{0}[:{1}]")
def slicing_axis0_right(arg1, arg2):
    return arg1.payload[: arg2.payload]


@operation("slicing_axis1_both", [f.matrix_or_more, f.int_primitive, f.int_primitive], "{0}[:, {1}:{2}]")
def slicing_axis1_both(arg1, arg2, arg3):
    return arg1.payload[:, arg2.payload : arg3.payload]


@operation("slicing_axis1_left", [f.matrix_or_more, f.int_primitive], "{0}[:, {1}:]")
def slicing_axis1_left(arg1, arg2):
    return arg1.payload[:, arg2.payload :]


@operation("slicing_axis1_right", [f.matrix_or_more, f.int_primitive], "{0}[:, :{1}]")
def slicing_axis1_right(arg1, arg2):
    return arg1.payload[:, : arg2.payload]


PYTHON_OPERATIONS = list(catalog)
