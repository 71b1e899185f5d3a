"""Random example inputs for dataset generation.

Inputs imitate what users write in task files: small tensors of rank 0 to 3
with at most 50 elements, mostly int32, with entries either small integers
or valid indices into one of the tensor's own dims.
"""

from typing import Dict, Tuple

import numpy as np

from ..search.task import MAX_INPUTS
from ..values.dtypes import DType
from ..values.value import Origin, Value

DTYPE_CHOICES = (DType.I32, DType.F32, DType.BOOL, DType.I64)
DTYPE_PROBABILITIES = (0.60, 0.25, 0.10, 0.05)
MAX_RANK = 3
MAX_DIM = 8
MAX_ELEMENTS = 50
INT_RANGE = (-10, 50)
FLOAT_RANGE = (-2.0, 2.0)


def random_shape(rng: np.random.Generator) -> Tuple[int, ...]:
    """A shape of rank 0..3 with dims in 1..8 and at most 50 elements."""
    rank = int(rng.integers(0, MAX_RANK + 1))
    while True:
        shape = tuple(int(d) for d in rng.integers(1, MAX_DIM + 1, size=rank))
        if int(np.prod(shape, dtype=np.int64)) <= MAX_ELEMENTS:
            return shape


def random_tensor(rng: np.random.Generator, name: str) -> Value:
    """One random input tensor bound to ``name``."""
    shape = random_shape(rng)
    dtype = DTYPE_CHOICES[int(rng.choice(len(DTYPE_CHOICES), p=DTYPE_PROBABILITIES))]
    if dtype.is_integer:
        if shape and rng.random() < 0.5:
            # index-like entries
            high = shape[int(rng.integers(0, len(shape)))]
            data = rng.integers(0, high, size=shape)
        else:
            data = rng.integers(INT_RANGE[0], INT_RANGE[1] + 1, size=shape)
    elif dtype is DType.F32:
        data = np.round(rng.uniform(*FLOAT_RANGE, size=shape), 2)
    else:
        data = rng.random(size=shape) < 0.5
    return Value.of_tensor(data, dtype, origin=Origin.user_input(name))


def random_inputs(rng: np.random.Generator) -> Dict[str, Value]:
    """One to three random inputs named ``in1``, ``in2``..."""
    count = int(rng.integers(1, MAX_INPUTS + 1))
    return {f"in{i}": random_tensor(rng, f"in{i}") for i in range(1, count + 1)}
