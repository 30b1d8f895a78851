"""Exception types shared across the package."""


class FuzzyFlowError(Exception):
    """Base class for every error raised by this package."""


class UsageError(FuzzyFlowError):
    """An operation was invoked with arguments that make no sense."""


class ConfigurationError(FuzzyFlowError):
    """A rule or variable references something that does not exist."""


class SchemaError(FuzzyFlowError):
    """The configured column mapping does not match the CSV file."""


class RowError(FuzzyFlowError):
    """A CSV data row could not be turned into a flow record."""

    def __init__(self, row: int, message: str):
        super().__init__(f"data row {row}: {message}")
        self.row = row


class FitError(FuzzyFlowError):
    """Membership functions cannot be placed on the supplied statistics."""


class ModelError(FuzzyFlowError):
    """A model document is malformed or violates a model invariant."""
