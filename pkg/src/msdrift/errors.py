"""Exception types shared across the package."""


class MsdriftError(Exception):
    """Base class for all msdrift errors."""


class NonFiniteError(MsdriftError):
    """Simulation state overflowed or became NaN (time step too large for the stiff drift)."""


class QuadratureFailureError(MsdriftError):
    """Periodic quadrature failed to converge within the refinement cap."""


class SingularGramError(MsdriftError):
    """Gram matrix of the drift basis is numerically singular (insufficient excitation)."""


class GridMismatchError(MsdriftError):
    """Two trajectories expected on the same sampling grid do not match."""


class EmptyResultError(MsdriftError):
    """An operation produced fewer than two samples."""


class SingularCovarianceError(MsdriftError):
    """Posterior precision matrix is numerically singular or invalid."""


class ConfigError(MsdriftError):
    """Invalid experiment configuration."""
