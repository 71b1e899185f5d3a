"""Collapsing subtrees of an expression into new inputs.

A program found by the search also teaches about the smaller programs it
contains: replacing the subtree ``squeeze(in2)`` of
``greater(add(in1, squeeze(in2)), in3)`` by a fresh input bound to that
subtree's value gives the task ``greater(add(in1, new1), in3)``.
"""

import itertools
from typing import Dict, List, Tuple

from ..values.value import DERIVED, ExpressionNode, Origin, Value

NEW_INPUT_PREFIX = "new"

# Stands in for a collapsed subtree until the variant's inputs are named.
_PLACEHOLDER = Origin.user_input("")


def collapse_subtrees(expression: Value) -> List[Tuple[Value, Dict[str, Value]]]:
    """Every way to replace non-overlapping subtrees by new inputs.

    The first variant is always the unchanged expression and the last one
    collapses the whole expression into a single input. New inputs are
    named ``new1``, ``new2``... in left-to-right order within each variant,
    and every variant evaluates to the original expression's value.

    Returns:
        Pairs of (variant expression, new input name -> bound value)
    """
    if expression.history is None:
        return [(expression, {})]
    variants = []
    for tree in _keep(expression):
        counter = itertools.count(1)
        bindings: Dict[str, Value] = {}
        variants.append((_name_inputs(tree, counter, bindings), bindings))
    whole = expression.as_leaf(Origin.user_input(f"{NEW_INPUT_PREFIX}1"), expression.weight)
    variants.append((whole, {whole.name: whole}))
    return variants


def _keep(value: Value) -> List[Value]:
    """Variants of ``value`` keeping its root operation."""
    node = value.history
    if node is None:
        return [value]
    child_variants = [_variants(arg) for arg in node.args]
    trees = []
    for args in itertools.product(*child_variants):
        if all(new is old for new, old in zip(args, node.args)):
            trees.append(value)
        else:
            trees.append(_rebuild(value, args))
    return trees


def _variants(value: Value) -> List[Value]:
    """Variants of a proper subtree: kept in some form, or collapsed whole."""
    if value.history is None:
        return [value]
    return _keep(value) + [value.as_leaf(_PLACEHOLDER, value.weight)]


def _rebuild(value: Value, args) -> Value:
    node = value.history
    return Value(value.kind, value.payload, DERIVED, history=ExpressionNode(node.op, tuple(args), node.op_weight))


def _name_inputs(value: Value, counter, bindings: Dict[str, Value]) -> Value:
    if value.origin == _PLACEHOLDER:
        name = f"{NEW_INPUT_PREFIX}{next(counter)}"
        leaf = value.as_leaf(Origin.user_input(name), value.weight)
        bindings[name] = leaf
        return leaf
    node = value.history
    if node is None:
        return value
    args = tuple(_name_inputs(arg, counter, bindings) for arg in node.args)
    if all(new is old for new, old in zip(args, node.args)):
        return value
    return _rebuild(value, args)
