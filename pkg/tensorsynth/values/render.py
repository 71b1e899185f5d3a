"""Turn expression histories into program text."""

import enum
import json

from .dtypes import DType
from .literals import tensor_data
from .value import Kind, Value


class RenderStyle(enum.Enum):
    """Program text flavours.

    FUNCTIONAL is ``op(arg, ...)`` and can be read back by the expression
    interpreter; PYTHONIC reads like TensorFlow code.
    """

    FUNCTIONAL = "functional"
    PYTHONIC = "pythonic"


def render(value: Value, style: RenderStyle = RenderStyle.PYTHONIC) -> str:
    """Render the expression that produced ``value``."""
    node = value.history
    if node is None:
        return render_leaf(value, style)
    args = [render(arg, style) for arg in node.args]
    return node.op.render(style, args)


def render_leaf(value: Value, style: RenderStyle) -> str:
    if value.name:
        return value.name
    kind = value.kind
    if kind is Kind.INT:
        return str(value.payload)
    if kind is Kind.FLOAT:
        return repr(value.payload)
    if kind is Kind.BOOL:
        return "True" if value.payload else "False"
    if kind is Kind.DTYPE:
        return render_dtype(value.payload, style)
    if kind is Kind.TUPLE:
        members = [render_leaf(member, style) for member in value.payload]
        if len(members) == 1:
            return f"({members[0]},)"
        return "(" + ", ".join(members) + ")"
    data = tensor_data(value.payload)
    if style is RenderStyle.FUNCTIONAL:
        return json.dumps({"dtype": value.dtype.short_name, "data": data})
    return f"tf.constant({json.dumps(data)}, dtype={render_dtype(value.dtype, style)})"


def render_dtype(dtype: DType, style: RenderStyle) -> str:
    if style is RenderStyle.PYTHONIC:
        return f"tf.{dtype.value}"
    return dtype.value
