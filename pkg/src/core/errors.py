"""Exception hierarchy for gfiso."""

from typing import Optional


class GfisoError(Exception):
    """Base class for all gfiso errors."""


class InvariantViolation(GfisoError):
    """A mathematical invariant failed beyond its tolerance."""

    def __init__(self, invariant: str, magnitude: float, detail: Optional[str] = None):
        self.invariant = invariant
        self.magnitude = float(magnitude)
        self.detail = detail
        message = f"{invariant} violated (magnitude {self.magnitude:.3e})"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class DecompositionError(InvariantViolation):
    """Preserved/dissipative split is inconsistent with the channel."""


class ClassificationError(InvariantViolation):
    """Momentum-resolved band classification is unstable."""


class GapClosedError(InvariantViolation):
    """Spectral gap closes on the sampled grid."""

    def __init__(self, gap: float, momentum, detail: Optional[str] = None):
        self.momentum = momentum
        super().__init__("spectral_gap", gap, detail or f"gap closes near q={momentum}")


class UsageError(GfisoError):
    """Invalid command-line usage or input file."""
