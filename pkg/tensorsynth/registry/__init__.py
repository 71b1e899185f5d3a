"""Operation library: definitions, filters, executors and weights."""

from .operation import OperationSpec  # noqa: F401
from .registry import (  # noqa: F401
    BUILTIN_OPERATIONS,
    OperationRegistry,
    WeightTable,
    apply_operation,
    arg_filter_pass,
    combination_filter_pass,
    docstring,
    load_docstrings,
    load_weights,
    registry_build,
)
