"""Exception types shared across the package."""


class IrratlabError(Exception):
    """Base class for all errors raised by irratlab operations."""


class PrecisionError(IrratlabError):
    """A certified computation could not be decided at any allowed precision.

    Raised when a radius is too large for the requested operation or when
    precision escalation hits the configured hard cap.
    """

    def __init__(self, message, required_bits=None):
        super().__init__(message)
        self.required_bits = required_bits


class DominationError(IrratlabError):
    """A tail bound was requested below the index where its geometric
    domination condition can be checked.  ``min_n`` is the smallest
    admissible truncation index."""

    def __init__(self, message, min_n):
        super().__init__(message)
        self.min_n = min_n


class CapacityError(IrratlabError):
    """A prime-table query went past the sieved range.  ``required`` carries
    the limit (or prime count) the caller would need."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class EliminationError(IrratlabError):
    """The pair-elimination engine cannot proceed (already reduced, or the
    table collapsed).  ``trace`` holds the step log gathered so far."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class ConvergenceError(IrratlabError):
    """An iterative solver exhausted its iteration budget."""
