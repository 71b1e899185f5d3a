"""Shape algebra under numpy/TensorFlow broadcasting rules."""

from math import prod
from typing import Sequence, Tuple

from ..exceptions import IncompatibleShapes

Shape = Tuple[int, ...]


def num_elements(shape: Sequence[int]) -> int:
    """Element count of a shape; the empty shape is a scalar with one element."""
    return prod(shape)


def broadcast_shapes(a: Sequence[int], b: Sequence[int]) -> Shape:
    """Broadcast two shapes, aligning dimensions from the trailing end.

    Raises:
        IncompatibleShapes: when an aligned pair differs and neither is 1.
    """
    rank = max(len(a), len(b))
    padded_a = (1,) * (rank - len(a)) + tuple(a)
    padded_b = (1,) * (rank - len(b)) + tuple(b)
    result = []
    for x, y in zip(padded_a, padded_b):
        if x == y or y == 1:
            result.append(x)
        elif x == 1:
            result.append(y)
        else:
            raise IncompatibleShapes(f"Cannot broadcast shapes {tuple(a)} and {tuple(b)}")
    return tuple(result)


def can_broadcast(*shapes: Sequence[int]) -> bool:
    """True iff all shapes broadcast together."""
    try:
        broadcast_all(*shapes)
    except IncompatibleShapes:
        return False
    return True


def broadcast_all(*shapes: Sequence[int]) -> Shape:
    result: Shape = ()
    for shape in shapes:
        result = broadcast_shapes(result, shape)
    return result
