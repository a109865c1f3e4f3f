"""Custom exceptions for the tensor-extremal toolkit."""

from typing import Optional


class TensorExtremalError(Exception):
    """Base exception for all tensor-extremal errors."""

    def __init__(self, message: str, original_exception: Optional[Exception] = None):
        super().__init__(message)
        self.original_exception = original_exception

    def __str__(self) -> str:
        if self.original_exception:
            return f"{super().__str__()} (Caused by: {self.original_exception})"
        return super().__str__()


class ConfigurationError(TensorExtremalError):
    """Error related to configuration loading or validation."""

    pass


class TensorFormatError(TensorExtremalError):
    """Malformed tensor input: bad JSON, missing fields or out-of-bounds coordinates."""

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        line: Optional[int] = None,
        original_exception: Optional[Exception] = None,
    ):
        super().__init__(message, original_exception)
        self.field = field
        self.line = line


class InvalidArgumentError(TensorExtremalError):
    """An axis, index, selection, division or numeric parameter is out of range."""

    pass


class UnsupportedDimensionError(InvalidArgumentError):
    """The operation is not defined for the tensor's number of dimensions."""

    pass


class ResourceCapError(TensorExtremalError):
    """An enumeration would exceed a configured cap."""

    def __init__(self, cap_name: str, limit: int, requested: int, flag: str):
        super().__init__(
            f"{cap_name} exceeded: requested {requested}, limit {limit}. "
            f"Raise it with {flag} if you really mean it."
        )
        self.cap_name = cap_name
        self.limit = limit
        self.requested = requested
        self.flag = flag


class SearchBudgetExceeded(TensorExtremalError):
    """A containment search ran out of nodes; the answer is unknown."""

    def __init__(self, message: str, nodes: int):
        super().__init__(message)
        self.nodes = nodes


class InvariantViolation(TensorExtremalError):
    """An internal check contradicted a result the computation relies on."""

    pass
