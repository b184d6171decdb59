"""Exception types shared across the package."""


class StretchLabError(Exception):
    """Base class for all errors raised by stretchlab."""


class InvalidDimensionError(StretchLabError, ValueError):
    """Truncation dimension or operator shapes are inconsistent."""


class InvalidStateError(StretchLabError, ValueError):
    """A density matrix violates trace, Hermiticity or positivity."""


class DomainError(StretchLabError, ValueError):
    """An argument lies outside the domain of a closed-form relation."""


class TruncationError(StretchLabError):
    """The requested computation would populate the truncation corner."""


class GridError(StretchLabError):
    """A phase-space grid is too small or too coarse for the requested data."""


class StabilityError(StretchLabError):
    """A time step violates the integrator's stability bound."""


class NumericalError(StretchLabError):
    """A numerical routine (eigensolver, fit) failed."""
