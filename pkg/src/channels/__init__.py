"""Real-space Gaussian channels."""

from src.channels.channel import (
    ChannelReport,
    GaussianChannel,
    apply,
    compose,
    random_channel,
    validate_channel,
)
from src.channels.decomposition import ModeDecomposition, decompose_modes
from src.channels.steady import (
    ConvergenceReport,
    convergence_rate,
    steady_state,
    steady_state_at,
)

__all__ = [
    "ChannelReport",
    "GaussianChannel",
    "apply",
    "compose",
    "random_channel",
    "validate_channel",
    "ModeDecomposition",
    "decompose_modes",
    "ConvergenceReport",
    "convergence_rate",
    "steady_state",
    "steady_state_at",
]
