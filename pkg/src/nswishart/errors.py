"""Exception hierarchy shared by all nswishart modules."""

from __future__ import annotations


class NswishartError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(NswishartError):
    """Matrix shapes are incompatible with the requested operation."""


class InvalidCorrelation(NswishartError):
    """Cross-correlation matrix violates an admissibility bound."""


class NotPSD(NswishartError):
    """Matrix expected to be positive semidefinite has a negative eigenvalue."""


class NoConvergence(NswishartError):
    """An iterative eigenvalue/singular-value computation did not converge."""


class SingularBlock(NswishartError):
    """A block (or one of its Schur complements) is numerically singular."""


class RootNotBracketed(NswishartError):
    """No sign change found on a contour ray; carries the offending angle."""

    def __init__(self, message: str, angle: float | None = None):
        super().__init__(message)
        self.angle = angle


class BranchError(NswishartError):
    """Square-root branch check failed during a contour cross-check."""


class SingularResolvent(NswishartError):
    """Resolvent evaluation point collided with an eigenvalue."""


class DomainError(NswishartError):
    """Input lies outside the mathematical domain of the operation."""


class ContourError(NswishartError):
    """Assembled contour violates a structural invariant (e.g. self-intersects)."""


class DegenerateContour(NswishartError):
    """Contour polygon has (numerically) zero area."""


class EmptyInput(NswishartError):
    """An operation that needs data received none."""


class EnsembleError(NswishartError):
    """One or more ensemble realizations failed; carries the failing indices."""

    def __init__(self, message: str, failures: list[tuple[int, Exception]] | None = None):
        super().__init__(message)
        self.failures = failures or []


class ConfigError(NswishartError):
    """Experiment configuration failed validation."""
