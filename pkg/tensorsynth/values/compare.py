"""Equality and size-limit checks on values."""

from dataclasses import dataclass

import numpy as np

from .value import Kind, Value


@dataclass(frozen=True)
class ToleranceConfig:
    """Float tolerance used when matching candidates against the target output."""

    rel_tol: float = 1e-4
    abs_tol: float = 1e-8

    def __post_init__(self):
        """Validate tolerances."""
        if self.rel_tol < 0 or self.abs_tol < 0:
            raise ValueError("Tolerances must be non-negative")


@dataclass(frozen=True)
class SizeLimits:
    """Largest tensors and tuples admitted into the search."""

    max_elements: int = 1000
    max_rank: int = 4
    max_dim: int = 100
    max_tuple_length: int = 4


DEFAULT_LIMITS = SizeLimits()
DEFAULT_TOLERANCE = ToleranceConfig()


def equal_exact(a: Value, b: Value) -> bool:
    """Bitwise payload equality with NaNs identified and -0.0 equal to +0.0."""
    if a is b:
        return True
    return a.canonical_bytes() == b.canonical_bytes()


def equal_output(candidate: Value, target: Value, tol: ToleranceConfig = DEFAULT_TOLERANCE) -> bool:
    """Compare a candidate with the target, allowing float tolerance."""
    if candidate.kind is not target.kind:
        return False
    kind = candidate.kind
    if kind is Kind.TENSOR:
        x, y = candidate.payload, target.payload
        if x.dtype != y.dtype or x.shape != y.shape:
            return False
        if x.dtype.kind != "f":
            return bool(np.array_equal(x, y))
        return _close(x.astype(np.float64), y.astype(np.float64), tol)
    if kind is Kind.FLOAT:
        return _close(np.float64(candidate.payload), np.float64(target.payload), tol)
    if kind is Kind.TUPLE:
        if len(candidate.payload) != len(target.payload):
            return False
        return all(equal_output(c, t, tol) for c, t in zip(candidate.payload, target.payload))
    return candidate.payload == target.payload


def _close(x, y, tol: ToleranceConfig) -> bool:
    both_nan = np.isnan(x) & np.isnan(y)
    with np.errstate(invalid="ignore"):
        bound = np.maximum(tol.abs_tol, tol.rel_tol * np.maximum(np.abs(x), np.abs(y)))
        close = (np.abs(x - y) <= bound) | (x == y)
    return bool(np.all(close | both_nan))


def within_limits(value: Value, limits: SizeLimits = DEFAULT_LIMITS) -> bool:
    """True iff every tensor reachable from the value fits the size limits."""
    kind = value.kind
    if kind is Kind.TENSOR:
        shape = value.payload.shape
        return (
            len(shape) <= limits.max_rank
            and value.payload.size <= limits.max_elements
            and all(dim <= limits.max_dim for dim in shape)
        )
    if kind is Kind.TUPLE:
        return len(value.payload) <= limits.max_tuple_length and all(
            within_limits(member, limits) for member in value.payload
        )
    return True
