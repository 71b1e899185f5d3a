"""Initial values of a search: inputs, constants and values read off the examples."""

import logging
from typing import List, Tuple

from ..values.dtypes import DType
from ..values.value import USER_CONSTANT, Origin, Value
from .explored import ExploredSet, SuperValue
from .task import TaskSpec

logger = logging.getLogger(__name__)

COMMON_INTS = (0, 1, -1)
COMMON_BOOLS = (True, False)
COMMON_DTYPES = (DType.I32, DType.I64, DType.F32, DType.BOOL)


def collect_initial_values(task: TaskSpec) -> ExploredSet:
    """Build the explored set holding the leaves of every expression.

    The set contains the user inputs and constants, the constants that are
    always chosen (0, 1, -1, True, False and the dtypes), the axis numbers below
    the largest input rank, every dimension length of the inputs and outputs,
    and the output shape as a tuple. When a payload arises from several
    origins the lowest-weight one is kept.
    """
    settings = task.settings
    candidates: List[Tuple[int, SuperValue]] = []

    def shared(value: Value, origin: Origin, weight: int):
        leaf = value.as_leaf(origin, weight)
        candidates.append((weight, SuperValue([leaf] * len(task.examples))))

    input_weight = settings.leaf_weight("input")
    for name in task.input_names:
        origin = Origin.user_input(name)
        leaves = [example.inputs[name].as_leaf(origin, input_weight) for example in task.examples]
        candidates.append((input_weight, SuperValue(leaves)))

    for constant in task.constants:
        shared(constant, USER_CONSTANT, settings.leaf_weight("constant"))

    common = Origin.heuristic("common_constant")
    common_weight = settings.leaf_weight("common_constant")
    for number in COMMON_INTS:
        shared(Value.of_int(number), common, common_weight)
    for flag in COMMON_BOOLS:
        shared(Value.of_bool(flag), common, common_weight)
    for dtype in COMMON_DTYPES:
        shared(Value.of_dtype(dtype), common, common_weight)

    max_rank = max(
        (value.rank for example in task.examples for value in example.inputs.values() if value.is_tensor),
        default=0,
    )
    axis = Origin.heuristic("axis")
    for number in range(max_rank):
        shared(Value.of_int(number), axis, settings.leaf_weight("axis"))

    dims = set()
    shapes = []
    for example in task.examples:
        for value in list(example.inputs.values()) + [example.output]:
            if value.is_tensor:
                dims.update(value.shape)
        if example.output.is_tensor and example.output.rank and example.output.shape not in shapes:
            shapes.append(example.output.shape)
    dimension = Origin.heuristic("dimension")
    for number in sorted(dims):
        shared(Value.of_int(number), dimension, settings.leaf_weight("dimension"))

    output_shape = Origin.heuristic("output_shape")
    for shape in shapes:
        members = [Value.of_int(dim) for dim in shape]
        shared(Value.of_tuple(members), output_shape, settings.leaf_weight("output_shape"))

    explored = ExploredSet(disable_filters=settings.disable_filters)
    # sorted() is stable, so ties keep the order above
    for _, value in sorted(candidates, key=lambda item: item[0]):
        if not explored.add(value):
            logger.debug("Initial value %r already present with lower weight", value.first)
    return explored
