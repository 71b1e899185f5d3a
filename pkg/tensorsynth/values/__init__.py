"""The runtime value model: tensors, primitives, expression histories."""

from .compare import (  # noqa: F401
    DEFAULT_LIMITS,
    DEFAULT_TOLERANCE,
    SizeLimits,
    ToleranceConfig,
    equal_exact,
    equal_output,
    within_limits,
)
from .dtypes import DType  # noqa: F401
from .literals import from_literal, to_literal  # noqa: F401
from .render import RenderStyle, render  # noqa: F401
from .shapes import Shape, broadcast_shapes, num_elements  # noqa: F401
from .value import (  # noqa: F401
    DERIVED,
    ELEMENT,
    USER_CONSTANT,
    ExpressionNode,
    Kind,
    Origin,
    OriginKind,
    Value,
    expression_size,
    expression_weight,
    fingerprint,
    input_names,
    operations_used,
)
