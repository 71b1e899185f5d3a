"""Exceptions for the synthesizer."""

import enum


class ConfigurationError(ValueError):
    """Exception raised for configuration errors."""

    preamble = None

    def get_response_content(self):
        """Returns a formated error message including the preamble and the message."""
        message = self.args[0].replace("\n", "\n\t")

        return f"{self.preamble}\n\n\t{message}"


class ServiceConfigurationError(ConfigurationError):
    """Exception raised for errors in settings, shipped data or model files."""

    preamble = "Service configuration error, check your .env file and data files."


class TaskConfigurationError(ConfigurationError):
    """Exception raised for errors in a user-provided task file."""

    preamble = "Task configuration error, check your task file."


class TaskParseError(TaskConfigurationError):
    """A task file could not be parsed.

    ``line`` is the 1-based line of the offending text, 0 when unknown.
    """

    def __init__(self, line: int, reason: str):
        """Store the location next to the message."""
        super().__init__(f"line {line}: {reason}" if line else reason)
        self.line = line
        self.reason = reason


class LimitViolation(TaskConfigurationError):
    """An example tensor exceeds the size limits of the search."""


class MissingWeight(ServiceConfigurationError):
    """The weight table has no entry for a registered operation."""

    def __init__(self, name: str):
        """Keep the operation name around for callers."""
        super().__init__(f"Weight table has no entry for operation '{name}'.")
        self.name = name


class MissingDocstring(ServiceConfigurationError):
    """The docstring file has no entry for a registered operation."""

    def __init__(self, name: str):
        """Keep the operation name around for callers."""
        super().__init__(f"Docstring file has no entry for operation '{name}'.")
        self.name = name


class UnknownOpError(KeyError):
    """Exception raised when an operation name is not in the registry."""

    def __init__(self, name: str, available=()):
        """Build a message listing the known operations."""
        message = f"Operation '{name}' is not registered."
        if available:
            message += f" Available operations: {', '.join(available)}"
        super().__init__(message)
        self.name = name

    def __str__(self):
        """Avoid KeyError's repr-quoting of the message."""
        return self.args[0]


class IncompatibleShapes(ValueError):
    """Two shapes cannot be broadcast together."""


class OpErrorKind(enum.Enum):
    """Why an operation refused or failed to produce a value."""

    PRECONDITION_VIOLATED = "precondition"
    NUMERIC_ERROR = "numeric"
    LIMIT_EXCEEDED = "limit"
    UNSUPPORTED = "unsupported"


class OpError(Exception):
    """An operation could not be applied to its arguments.

    The search treats every OpError as "discard this candidate".
    """

    def __init__(self, kind: OpErrorKind, detail: str = ""):
        """Store the error kind and a human readable detail."""
        super().__init__(f"{kind.value}: {detail}" if detail else kind.value)
        self.kind = kind
        self.detail = detail


class SearchTimeout(Exception):  # noqa: N818
    """The time budget ran out before any solution was found."""


class SearchExhausted(Exception):  # noqa: N818
    """The weight space was exhausted without finding a solution."""


class TooManyInputs(ValueError):
    """A task has more inputs than the featurizer supports."""


class DimensionMismatch(ValueError):
    """A feature vector does not fit the model parameters."""


class EmptyDataset(ValueError):
    """Training was requested on an empty dataset."""
