"""Tensor data types supported by the search."""

import enum

import numpy as np


class DType(enum.Enum):
    """The four element types a tensor may carry."""

    I32 = "int32"
    I64 = "int64"
    F32 = "float32"
    BOOL = "bool"

    @property
    def np_dtype(self) -> np.dtype:
        """The numpy dtype backing this type."""
        return np.dtype(self.value)

    @property
    def short_name(self) -> str:
        """Name used by the tensor literal form (``i32``, ``f32``...)."""
        return _SHORT_NAMES[self]

    @property
    def is_integer(self) -> bool:
        return self in (DType.I32, DType.I64)

    @property
    def is_float(self) -> bool:
        return self is DType.F32

    @property
    def is_numeric(self) -> bool:
        return self is not DType.BOOL

    @classmethod
    def from_numpy(cls, dtype) -> "DType":
        """Map a numpy dtype onto a DType, raising ValueError for others."""
        try:
            return _FROM_NUMPY[np.dtype(dtype)]
        except KeyError:
            raise ValueError(f"Unsupported tensor dtype: {dtype}")

    @classmethod
    def from_name(cls, name: str) -> "DType":
        """Parse ``i32``, ``int32`` or ``tf.int32`` style names."""
        key = name.strip().lower()
        if key.startswith("tf."):
            key = key[3:]
        for member in cls:
            if key in (member.value, member.short_name):
                return member
        raise ValueError(f"Unknown dtype name: {name!r}")


_SHORT_NAMES = {
    DType.I32: "i32",
    DType.I64: "i64",
    DType.F32: "f32",
    DType.BOOL: "bool",
}

_FROM_NUMPY = {member.np_dtype: member for member in DType}
