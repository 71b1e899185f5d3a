"""Runtime values explored by the search.

A :class:`Value` is one concrete result (a primitive, a dtype literal, a tuple
or a dense tensor) together with the expression that produced it. Leaves carry
an origin and an assigned weight; derived values carry an
:class:`ExpressionNode` and compute their weight from it.
"""

from __future__ import annotations

import enum
import hashlib
import struct
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional, Tuple

import numpy as np

from .dtypes import DType

if TYPE_CHECKING:
    from ..registry.operation import OperationSpec


class Kind(enum.Enum):
    """Payload variants."""

    INT = "int"
    FLOAT = "float"
    BOOL = "bool"
    DTYPE = "dtype"
    TUPLE = "tuple"
    TENSOR = "tensor"


PRIMITIVE_KINDS = frozenset({Kind.INT, Kind.FLOAT, Kind.BOOL})


class OriginKind(enum.Enum):
    """Where a value came from."""

    INPUT = "input"
    CONSTANT = "constant"
    HEURISTIC = "heuristic"
    DERIVED = "derived"
    # Component of a tuple built by an operation; never stored by the search.
    ELEMENT = "element"


@dataclass(frozen=True)
class Origin:
    """Origin of a value; ``label`` is the input name or heuristic kind."""

    kind: OriginKind
    label: str = ""

    @classmethod
    def user_input(cls, name: str) -> "Origin":
        return cls(OriginKind.INPUT, name)

    @classmethod
    def heuristic(cls, kind: str) -> "Origin":
        return cls(OriginKind.HEURISTIC, kind)


DERIVED = Origin(OriginKind.DERIVED)
ELEMENT = Origin(OriginKind.ELEMENT)
USER_CONSTANT = Origin(OriginKind.CONSTANT)

# weight of leaves built without one, such as tuple members and bare literals
ELEMENT_WEIGHT = 1


@dataclass(frozen=True, eq=False)
class ExpressionNode:
    """One operation application: ``op(args...)``.

    ``op_weight`` is the weight the operation had when the node was built,
    which may differ from its base weight after reweighting.
    """

    op: "OperationSpec"
    args: Tuple["Value", ...]
    op_weight: int

    @property
    def op_name(self) -> str:
        return self.op.name


class Value:
    """An immutable runtime value with its expression history."""

    __slots__ = (
        "kind",
        "payload",
        "origin",
        "history",
        "_weight",
        "_canonical",
        "_fingerprint",
    )

    def __init__(
        self,
        kind: Kind,
        payload,
        origin: Origin,
        history: Optional[ExpressionNode] = None,
        weight: Optional[int] = None,
    ):
        """Build a value; use the ``of_*`` constructors instead where possible."""
        if (history is None) != (origin.kind is not OriginKind.DERIVED):
            raise ValueError("history must be present exactly for derived values")
        if kind is Kind.TENSOR:
            DType.from_numpy(payload.dtype)
            payload.setflags(write=False)
        self.kind = kind
        self.payload = payload
        self.origin = origin
        self.history = history
        self._weight = weight
        self._canonical: Optional[bytes] = None
        self._fingerprint: Optional[bytes] = None

    # ---- Constructors ----
    @classmethod
    def of_tensor(cls, data, dtype: Optional[DType] = None, origin: Origin = ELEMENT, **kwargs) -> "Value":
        """Wrap array-like data as a tensor value, converting to ``dtype`` if given."""
        array = np.array(data, dtype=dtype.np_dtype if dtype else None)
        return cls(Kind.TENSOR, array, origin, **kwargs)

    @classmethod
    def of_int(cls, number: int, origin: Origin = ELEMENT, **kwargs) -> "Value":
        return cls(Kind.INT, int(number), origin, **kwargs)

    @classmethod
    def of_float(cls, number: float, origin: Origin = ELEMENT, **kwargs) -> "Value":
        return cls(Kind.FLOAT, float(number), origin, **kwargs)

    @classmethod
    def of_bool(cls, flag: bool, origin: Origin = ELEMENT, **kwargs) -> "Value":
        return cls(Kind.BOOL, bool(flag), origin, **kwargs)

    @classmethod
    def of_dtype(cls, dtype: DType, origin: Origin = ELEMENT, **kwargs) -> "Value":
        return cls(Kind.DTYPE, dtype, origin, **kwargs)

    @classmethod
    def of_tuple(cls, members: Iterable["Value"], origin: Origin = ELEMENT, **kwargs) -> "Value":
        return cls(Kind.TUPLE, tuple(members), origin, **kwargs)

    def as_leaf(self, origin: Origin, weight: int) -> "Value":
        """A copy of this payload as a leaf with the given origin and weight."""
        return Value(self.kind, self.payload, origin, weight=weight)

    # ---- Payload inspection ----
    @property
    def is_tensor(self) -> bool:
        return self.kind is Kind.TENSOR

    @property
    def is_primitive(self) -> bool:
        return self.kind in PRIMITIVE_KINDS

    @property
    def is_int(self) -> bool:
        """True for integer primitives (not for scalar tensors)."""
        return self.kind is Kind.INT

    @property
    def is_tuple(self) -> bool:
        return self.kind is Kind.TUPLE

    @property
    def dtype(self) -> Optional[DType]:
        if self.kind is Kind.TENSOR:
            return DType.from_numpy(self.payload.dtype)
        return None

    @property
    def shape(self) -> Optional[Tuple[int, ...]]:
        if self.kind is Kind.TENSOR:
            return self.payload.shape
        return None

    @property
    def rank(self) -> int:
        """Tensor rank; 0 for primitives and 1 for tuples."""
        if self.kind is Kind.TENSOR:
            return self.payload.ndim
        return 1 if self.kind is Kind.TUPLE else 0

    @property
    def name(self) -> Optional[str]:
        """Input name for user inputs."""
        if self.origin.kind is OriginKind.INPUT:
            return self.origin.label
        return None

    @property
    def is_leaf(self) -> bool:
        return self.history is None

    # ---- Weight ----
    @property
    def weight(self) -> int:
        """Expression weight: leaves return their own, nodes the recursive sum."""
        if self._weight is None:
            if self.history is None:
                return ELEMENT_WEIGHT
            node = self.history
            self._weight = node.op_weight + sum(arg.weight for arg in node.args)
        return self._weight

    # ---- Identity ----
    def canonical_bytes(self) -> bytes:
        """Byte form used for exact equality and fingerprints."""
        if self._canonical is None:
            self._canonical = _canonical(self)
        return self._canonical

    @property
    def fingerprint(self) -> bytes:
        if self._fingerprint is None:
            self._fingerprint = hashlib.blake2b(self.canonical_bytes(), digest_size=16).digest()
        return self._fingerprint

    def __repr__(self):
        if self.kind is Kind.TENSOR:
            body = f"{self.dtype.short_name}{list(self.shape)} {self.payload.tolist()}"
        elif self.kind is Kind.TUPLE:
            body = repr(list(self.payload))
        elif self.kind is Kind.DTYPE:
            body = self.payload.value
        else:
            body = repr(self.payload)
        return f"Value({self.kind.value}: {body})"


def _canonical(value: Value) -> bytes:
    kind = value.kind
    payload = value.payload
    if kind is Kind.TENSOR:
        header = f"T:{payload.dtype.str}:{payload.shape}:".encode()
        if payload.dtype.kind == "f":
            data = payload.astype(np.float32, copy=True)
            # -0.0 == 0.0 is True, so this also canonicalizes negative zero
            data[data == 0] = 0.0
            data[np.isnan(data)] = np.nan
        else:
            data = np.ascontiguousarray(payload)
        return header + data.tobytes()
    if kind is Kind.INT:
        return b"I:" + str(payload).encode()
    if kind is Kind.FLOAT:
        number = 0.0 if payload == 0 else payload
        if number != number:
            number = float("nan")
        return b"F:" + struct.pack("<d", number)
    if kind is Kind.BOOL:
        return b"B:1" if payload else b"B:0"
    if kind is Kind.DTYPE:
        return b"D:" + payload.value.encode()
    parts = [member.canonical_bytes() for member in payload]
    return b"U:" + b"".join(len(part).to_bytes(4, "little") + part for part in parts)


def fingerprint(value: Value) -> bytes:
    """Fixed-width digest of a value's payload."""
    return value.fingerprint


def expression_weight(value: Value) -> int:
    """Weight of the expression that produced ``value`` (cached on the value)."""
    return value.weight


def expression_size(value: Value) -> int:
    """Number of operation nodes in the expression tree."""
    if value.history is None:
        return 0
    return 1 + sum(expression_size(arg) for arg in value.history.args)


def operations_used(value: Value) -> set:
    """Names of operations appearing in the expression tree."""
    if value.history is None:
        return set()
    names = {value.history.op_name}
    for arg in value.history.args:
        names |= operations_used(arg)
    return names


def input_names(value: Value) -> set:
    """Names of user inputs the expression reads."""
    if value.history is None:
        return {value.name} if value.name else set()
    names = set()
    for arg in value.history.args:
        names |= input_names(arg)
    return names
