"""Operation definitions."""

from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple

from ..values.render import RenderStyle
from .filters import ArgFilter, CombinationFilter


@dataclass(frozen=True, eq=False)
class OperationSpec:
    """One synthesizable operation.

    Attributes:
        name: unique identifier, also the FUNCTIONAL rendering name
        arg_filters: one filter per argument position
        executor: pure function of the argument values returning an ndarray,
            a tuple of values or a value
        pythonic: format string for PYTHONIC rendering, ``{0}`` is argument 1
        combination_filter: optional joint filter over the argument list
        base_weight: weight from the weight table
        docstring: English description used by the natural language models
    """

    name: str
    arg_filters: Tuple[ArgFilter, ...]
    executor: Callable[..., Any]
    pythonic: str
    combination_filter: Optional[CombinationFilter] = None
    base_weight: int = 1
    docstring: str = ""

    @property
    def arity(self) -> int:
        return len(self.arg_filters)

    def render(self, style: RenderStyle, args: Sequence[str]) -> str:
        """Render an application of this operation to already rendered arguments."""
        if style is RenderStyle.FUNCTIONAL:
            return f"{self.name}({', '.join(args)})"
        return self.pythonic.format(*args)

    def arg_filter_pass(self, position: int, value) -> bool:
        """Argument filter check, ``position`` counting from 1."""
        if not 1 <= position <= self.arity:
            raise IndexError(f"{self.name} has no argument {position}")
        return self.arg_filters[position - 1](value)

    def combination_filter_pass(self, args) -> bool:
        if self.combination_filter is None:
            return True
        return self.combination_filter(args)

    def accepts(self, args) -> bool:
        """Both filter stages for a full argument list."""
        if len(args) != self.arity:
            return False
        for position, value in enumerate(args, start=1):
            if not self.arg_filter_pass(position, value):
                return False
        return self.combination_filter_pass(args)

    def __repr__(self):
        return f"OperationSpec({self.name}/{self.arity}, weight={self.base_weight})"


class OperationCatalog:
    """Ordered collection of operation definitions built with a decorator.

    Usage::

        catalog = OperationCatalog()

        @catalog.operation("abs", [numeric_tensor], "tf.abs({0})")
        def abs_(x):
            return np.abs(x.payload)
    """

    def __init__(self):
        """Start empty."""
        self.operations: List[OperationSpec] = []

    def operation(
        self,
        name: str,
        arg_filters: Sequence[ArgFilter],
        pythonic: str,
        combination: Optional[CombinationFilter] = None,
    ):
        """Register the decorated executor under ``name``."""

        def decorator(func):
            self.operations.append(
                OperationSpec(
                    name=name,
                    arg_filters=tuple(arg_filters),
                    executor=func,
                    pythonic=pythonic,
                    combination_filter=combination,
                )
            )
            return func

        return decorator

    def __iter__(self):
        return iter(self.operations)
