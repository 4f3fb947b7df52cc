"""Exception hierarchy shared by every latsurf module."""


class LatsurfError(Exception):
    """Base class for all errors raised by latsurf."""


class DomainError(LatsurfError, ValueError):
    """An input lies outside the domain of an operation."""


class DegenerateError(DomainError):
    """Geometry collapsed (collinear points, zero-length facet, empty hull)."""


class PreconditionError(DomainError):
    """A formula was requested outside the regime where it is valid."""


class InvalidPotentialError(DomainError):
    """The potential does not satisfy the decay or symmetry requirements."""


class WulffUndefinedError(DomainError):
    """The surface energy density is not positive, so no Wulff shape exists."""
