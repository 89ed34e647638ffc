"""Typed failure modes shared across the solver."""


class GNError(Exception):
    """Base class for all solver errors."""


class NonFiniteField(GNError):
    """A field picked up NaN or Inf entries."""


class DepthViolation(GNError):
    """The total water depth dropped below the configured guard."""


class NoConvergence(GNError):
    """The iterative solver hit its iteration cap.

    Carries the final SolveReport as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NormBlowup(GNError):
    """The energy-norm ceiling was exceeded during a run."""


class StepRejected(GNError):
    """A time step failed a guard mid-stage."""


class ConfigError(GNError):
    """A scenario configuration could not be parsed or validated."""
