"""Exception hierarchy shared by all modules."""


class OpdynError(Exception):
    """Base class for all errors raised by this package."""


class InputError(OpdynError, ValueError):
    """Invalid argument: bad dimension, parameter out of range, NaN entry."""


class SchemaError(InputError):
    """Malformed game or config document. Carries the offending location."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class ResourceError(OpdynError, RuntimeError):
    """An iteration or step cap was hit before the requested tolerance."""
