"""Exception hierarchy shared by all modules."""


class ShgSteerError(Exception):
    """Base class for all package errors."""


class ParameterError(ShgSteerError, ValueError):
    """Invalid physical parameters or configuration values."""


class SolverError(ShgSteerError):
    """Root finder failed to converge.

    Carries the best iterate found so far and its residual.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class RegimeError(ShgSteerError):
    """Operating point is at or above the self-pulsing instability."""


class NumericalError(ShgSteerError):
    """Linear algebra failure (singular system, eigensolver breakdown)."""


class ConsistencyError(ShgSteerError):
    """Internal cross-check failed (e.g. non-negligible imaginary residue)."""


class DivergenceError(NumericalError):
    """Too many stochastic trajectories escaped the integration domain.

    ``partial`` holds the statistics accumulated from the surviving
    trajectories, ``fraction`` the discarded fraction.
    """

    def __init__(self, message, partial=None, fraction=None):
        super().__init__(message)
        self.partial = partial
        self.fraction = fraction
