"""Translation-invariant channels in momentum space."""

from src.momentum.bands import BandClassification, classify_bands
from src.momentum.channel import (
    MomentumChannel,
    brickwall_realspace,
    build_brickwall,
    compose_momentum,
)
from src.momentum.decay import DecayReport, realspace_decay
from src.momentum.spectrum import ContinuityReport, bulk_spectrum
from src.momentum.steady import MomentumSteadyState, steady_state_k

__all__ = [
    "BandClassification",
    "classify_bands",
    "MomentumChannel",
    "brickwall_realspace",
    "build_brickwall",
    "compose_momentum",
    "DecayReport",
    "realspace_decay",
    "ContinuityReport",
    "bulk_spectrum",
    "MomentumSteadyState",
    "steady_state_k",
]
