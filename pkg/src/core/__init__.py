"""Majorana correlation matrices and their spectra."""

from src.core.correlation import (
    CorrelationMatrix,
    EntanglementSpectrum,
    MomentumCorrelation,
    BandSpectrum,
)
from src.core.errors import (
    GfisoError,
    InvariantViolation,
    DecompositionError,
    ClassificationError,
    GapClosedError,
    UsageError,
)

__all__ = [
    "CorrelationMatrix",
    "EntanglementSpectrum",
    "MomentumCorrelation",
    "BandSpectrum",
    "GfisoError",
    "InvariantViolation",
    "DecompositionError",
    "ClassificationError",
    "GapClosedError",
    "UsageError",
]
