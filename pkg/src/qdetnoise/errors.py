"""Exception types shared across the package."""


class QDetNoiseError(Exception):
    """Base class for all errors raised by qdetnoise."""


class GridMismatchError(QDetNoiseError):
    """Grids disagree, or an operation needing f(-omega) got an asymmetric grid."""


class StabilityError(QDetNoiseError):
    """The network drift matrix has an eigenvalue with non-negative real part."""


class SingularNormalizationError(QDetNoiseError):
    """Attempted to normalize by a response that vanishes somewhere on the grid."""


class NotAValidDetectorError(QDetNoiseError):
    """Readout back-acts on itself or on the probe (nonzero reverse response)."""


class DegenerateReadoutError(QDetNoiseError):
    """The chosen readout quadrature carries no signal at zero frequency."""


class OpticalSpringInstabilityError(QDetNoiseError):
    """Back-action modification of the mechanics has no stable steady state."""


class InvalidMatrixError(QDetNoiseError):
    """A matrix or moment function violates Hermiticity/physicality requirements."""
