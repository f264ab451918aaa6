"""Dense float64 tensor helpers.

Tensors are plain C-contiguous ``numpy.ndarray`` values with dtype float64;
everything here is a thin contract layer (shape checks, domain checks,
finiteness guarantees) on top of numpy arithmetic. All math in this package
is done in 64-bit floats: the gradient-check tolerances and the bit-exact
equivalence tests are too tight for float32.
"""

import numpy as np

from .errors import DomainError, ShapeMismatchError

ELEMENTWISE_OPS = ("add", "sub", "mul", "div", "sqrt", "scale")


def as_tensor(values, shape=None):
    """Coerce ``values`` to a C-contiguous float64 array, optionally reshaped."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if shape is not None:
        arr = arr.reshape(shape)
    return arr


def _check_same_shape(op, a, b):
    if a.shape != b.shape:
        raise ShapeMismatchError(op, a.shape, b.shape)


def elementwise(op, a, b=None):
    """Apply ``op`` element by element and return a new tensor.

    Binary ops (add, sub, mul, div) accept a tensor or a scalar for ``b``;
    ``scale`` requires a scalar, ``sqrt`` is unary. Divisors and sqrt
    arguments must be strictly positive.
    """
    if op not in ELEMENTWISE_OPS:
        raise ValueError(f"unknown elementwise op {op!r}")
    a = as_tensor(a)

    if op == "sqrt":
        if b is not None:
            raise ValueError("sqrt takes a single tensor")
        if np.any(a <= 0.0):
            raise DomainError("sqrt requires strictly positive elements")
        return np.sqrt(a)

    if op == "scale":
        if b is None or np.ndim(b) != 0:
            raise ValueError("scale requires a scalar factor")
        return a * float(b)

    if b is None:
        raise ValueError(f"{op} requires a second operand")
    scalar = np.ndim(b) == 0
    if not scalar:
        b = as_tensor(b)
        _check_same_shape(op, a, b)
    else:
        b = float(b)

    with np.errstate(over="ignore", invalid="ignore"):
        if op == "add":
            out = a + b
        elif op == "sub":
            out = a - b
        elif op == "mul":
            out = a * b
        else:  # div
            if np.any(np.asarray(b) <= 0.0):
                raise DomainError("div requires strictly positive divisor elements")
            out = a / b

    if not np.all(np.isfinite(out)):
        raise DomainError(f"{op} produced non-finite elements")
    return out


def check_finite(a, name="tensor"):
    """Raise DomainError if ``a`` holds NaN or infinity."""
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} contains non-finite elements")
    return a


def mean_std(values):
    """Mean and sample standard deviation (ddof=1; 0.0 for a single value)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise DomainError("mean_std of an empty sequence")
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std
