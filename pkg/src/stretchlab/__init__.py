"""Numerical checks of the view of classical mechanics as a high-entropy limit of quantum mechanics."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    GridError,
    InvalidDimensionError,
    InvalidStateError,
    NumericalError,
    StabilityError,
    StretchLabError,
    TruncationError,
)
from .fock_core import FockState, SystemUnits  # noqa: E402
from .phasegrid import PhaseGrid  # noqa: E402
from .quasiprob import Kind, QuasiDistribution  # noqa: E402

__all__ = [
    "__version__",
    "DomainError",
    "FockState",
    "GridError",
    "InvalidDimensionError",
    "InvalidStateError",
    "Kind",
    "NumericalError",
    "PhaseGrid",
    "QuasiDistribution",
    "StabilityError",
    "StretchLabError",
    "SystemUnits",
    "TruncationError",
]
