"""Exception types shared across the package."""


class LrdoptError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatchError(LrdoptError, ValueError):
    """Two tensors that must agree in shape do not."""

    def __init__(self, op, left_shape, right_shape):
        self.op = op
        self.left_shape = tuple(left_shape)
        self.right_shape = tuple(right_shape)
        super().__init__(
            f"{op}: shape mismatch {self.left_shape} vs {self.right_shape}"
        )


class DomainError(LrdoptError, ValueError):
    """An argument lies outside the operation's numeric domain."""


class NonFiniteGradientError(LrdoptError, ValueError):
    """A gradient tensor contains NaN or infinity."""

    def __init__(self, tensor_index, element_index, value):
        self.tensor_index = tensor_index
        self.element_index = element_index
        self.value = value
        super().__init__(
            f"non-finite gradient in tensor {tensor_index} at flat element "
            f"{element_index}: {value!r}"
        )


class DataFormatError(LrdoptError, ValueError):
    """A data file does not match its documented binary layout."""

    def __init__(self, path, offset, expected, found):
        self.path = str(path)
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(
            f"{path}: at byte offset {offset} expected {expected}, found {found}"
        )


class SpecError(LrdoptError, ValueError):
    """An experiment spec is malformed; names the offending field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"spec field '{field}': {message}")
