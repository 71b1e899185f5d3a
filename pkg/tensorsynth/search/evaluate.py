"""Re-execution of expressions and an interpreter for FUNCTIONAL program text.

FUNCTIONAL text is a Python expression made of operation calls, input names,
numbers, ``True``/``False``, dtype names (``int32``, ``int64``, ``float32``,
``bool``), parenthesized tuples and tensor constants written as dtype-wrapped
JSON objects::

    cast(where_1(sequence_mask(in1)), int32)
    gather_2(in1, argsort_stable(in2, 0))
"""

import ast
import json
from typing import Mapping, Optional, Sequence

from ..exceptions import OpError, OpErrorKind
from ..registry.registry import OperationRegistry, apply_operation
from ..values.dtypes import DType
from ..values.literals import from_literal
from ..values.value import Origin, Value
from .explored import SuperValue
from .task import Example

DTYPE_NAMES = {dtype.value: dtype for dtype in DType}


def evaluate_expression(expression: Value, inputs: Mapping[str, Value]) -> Value:
    """Re-execute an expression bottom-up with different input values.

    Leaves naming an input are replaced by ``inputs[name]``; other leaves are
    kept. Operations keep the weight recorded in the expression.

    Raises:
        OpError: the first error raised by an operation
    """
    node = expression.history
    if node is None:
        name = expression.name
        if name is None:
            return expression
        if name not in inputs:
            raise OpError(OpErrorKind.PRECONDITION_VIOLATED, f"no value for input '{name}'")
        return inputs[name].as_leaf(Origin.user_input(name), expression.weight)
    args = [evaluate_expression(arg, inputs) for arg in node.args]
    return apply_operation(node.op, args, weight=node.op_weight, prechecked=True)


def evaluate_on_examples(expression: Value, examples: Sequence[Example]) -> SuperValue:
    """Run an expression on every example, giving one result per example."""
    return SuperValue([evaluate_expression(expression, example.inputs) for example in examples])


def evaluate_text(
    text: str,
    inputs: Mapping[str, Value],
    registry: OperationRegistry,
    weights: Optional[Mapping[str, int]] = None,
) -> Value:
    """Parse and evaluate FUNCTIONAL program text.

    Args:
        text: the program
        inputs: values bound to the input names
        registry: operations the program may call
        weights: operation weights recorded in the result, defaults to base weights

    Raises:
        ValueError: If the text is not a valid program
        OpError: If an operation fails
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as e:
        raise ValueError(f"cannot parse program: {e.msg}")
    return _Interpreter(text.strip(), inputs, registry, weights).visit(tree.body)


class _Interpreter(ast.NodeVisitor):
    def __init__(self, source, inputs, registry, weights):
        self.source = source
        self.inputs = inputs
        self.registry = registry
        self.weights = weights

    def generic_visit(self, node):
        raise ValueError(f"unsupported syntax: {ast.dump(node)}")

    def visit_Call(self, node: ast.Call) -> Value:
        if not isinstance(node.func, ast.Name) or node.keywords:
            raise ValueError("calls must be plain operation calls")
        op = self.registry.get(node.func.id)
        args = [self.visit(arg) for arg in node.args]
        weight = self.weights[op.name] if self.weights is not None else None
        return apply_operation(op, args, weight=weight, prechecked=True)

    def visit_Name(self, node: ast.Name) -> Value:
        name = node.id
        if name in self.inputs:
            value = self.inputs[name]
            return value.as_leaf(Origin.user_input(name), value.weight)
        if name in DTYPE_NAMES:
            return Value.of_dtype(DTYPE_NAMES[name], weight=1)
        raise ValueError(f"unknown name '{name}'")

    def visit_Constant(self, node: ast.Constant) -> Value:
        if isinstance(node.value, bool):
            return Value.of_bool(node.value, weight=1)
        if isinstance(node.value, int):
            return Value.of_int(node.value, weight=1)
        if isinstance(node.value, float):
            return Value.of_float(node.value, weight=1)
        raise ValueError(f"unsupported constant {node.value!r}")

    def visit_UnaryOp(self, node: ast.UnaryOp) -> Value:
        if isinstance(node.op, ast.USub) and isinstance(node.operand, ast.Constant):
            value = self.visit_Constant(node.operand)
            if value.is_primitive and not isinstance(value.payload, bool):
                return Value(value.kind, -value.payload, value.origin, weight=1)
        raise ValueError("only negative numbers are supported")

    def visit_Tuple(self, node: ast.Tuple) -> Value:
        return Value.of_tuple([self.visit(element) for element in node.elts], weight=1)

    def visit_Dict(self, node: ast.Dict) -> Value:
        segment = ast.get_source_segment(self.source, node)
        return from_literal(json.loads(segment), weight=1)
