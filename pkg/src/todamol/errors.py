"""Exception types shared across the package."""


class TodaError(Exception):
    """Base class for package-specific failures."""


class DomainError(TodaError, LookupError):
    """A cell (t, n) was requested outside the stored trapezoidal domain."""


class DataExhaustedError(TodaError, ValueError):
    """The initial data is too short to label or evaluate the requested object."""


class EnumerationCapError(TodaError, RuntimeError):
    """A brute-force enumeration would exceed its configured size cap."""


class InputFormatError(TodaError, ValueError):
    """Malformed text input (initial data files, serialized tables)."""
