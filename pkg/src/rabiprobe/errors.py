"""Exception types shared across the solvers and the CLI."""

from __future__ import annotations


class RabiProbeError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(RabiProbeError):
    """A run configuration file or CLI argument combination is invalid."""


class NoConvergence(RabiProbeError):
    """An iterative solver exhausted its budget without meeting tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class StepSizeUnderflow(NoConvergence):
    """An adaptive integrator was forced below the minimum step size."""


class RegimeNotBracketed(RabiProbeError):
    """A transition search was asked to bracket a regime change that the
    supplied amplitude axis does not actually straddle."""
