"""Exception hierarchy shared across the package."""


class ZClosureError(Exception):
    """Base class for all errors raised by this package."""


class ResourceLimitError(ZClosureError):
    """A configured resource ceiling was exceeded (field degree, precision)."""


class FieldDegreeError(ResourceLimitError):
    """A number field construction would exceed the configured degree cap."""


class BudgetExhaustedError(ResourceLimitError):
    """The closure driver ran out of its BFS length or time budget.

    Carries the partial trace collected so far in ``trace``.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class SearchExhaustedError(ZClosureError):
    """The randomized Cartan subalgebra search hit its trial limit."""


class SingularMatrixError(ZClosureError):
    """An operation requiring an invertible matrix received a singular one."""


class NotUnipotentError(ZClosureError):
    """log() was asked for a matrix that is not unipotent."""


class NotDefinedOverQError(ZClosureError):
    """A subspace descent to Q failed its dimension check."""


class NotSplitError(ZClosureError):
    """A Cartan subalgebra did not split into semisimple plus nilpotent parts."""


class InvariantViolationError(ZClosureError):
    """An internal runtime invariant failed; indicates a bug, not bad input."""


class ParseError(ZClosureError):
    """An input document could not be parsed exactly."""
