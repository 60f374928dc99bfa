"""Exception hierarchy.

Every error raised by the library derives from :class:`QHankelError`; the
CLI maps :class:`DomainError` (and its subclasses) to a usage exit code and
:class:`InvariantError` to an internal-failure exit code.
"""


class QHankelError(Exception):
    """Base class for all library errors."""


class DomainError(QHankelError, ValueError):
    """A parameter lies outside its documented domain."""


class InvalidPhiError(DomainError):
    pass


class InvalidMeasureError(DomainError):
    pass


class UndefinedBoundError(DomainError):
    pass


class SeriesError(QHankelError, ValueError):
    """Base class for truncated power series failures."""


class SingularDivisorError(SeriesError, ZeroDivisionError):
    pass


class CompositionDomainError(SeriesError):
    pass


class NotNormalizedError(SeriesError):
    pass


class BranchError(SeriesError):
    pass


class NotCaratheodoryError(QHankelError, ValueError):
    pass


class InvariantError(QHankelError, RuntimeError):
    """An internal consistency check failed."""


class StructureViolationError(InvariantError):
    pass
