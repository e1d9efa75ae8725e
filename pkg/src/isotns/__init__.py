"""Gaussian isometric tensor network states."""

from src.isotns.lightlike import (
    LightlikeSample,
    lightlike_channel,
    lightlike_momentum_channel,
    ring_contraction,
)
from src.isotns.mps import (
    BoundaryReport,
    boundary_independence,
    bulk_physical_block,
    contract_column,
    physical_blocks,
)
from src.isotns.tensor import (
    IsoTensor,
    Leg,
    LegName,
    TensorChannel,
    TensorReport,
    channel_from_tensor,
    dilate_channel,
    random_isometric_tensor,
    validate_tensor,
)

__all__ = [
    "LightlikeSample",
    "lightlike_channel",
    "lightlike_momentum_channel",
    "ring_contraction",
    "BoundaryReport",
    "boundary_independence",
    "bulk_physical_block",
    "contract_column",
    "physical_blocks",
    "IsoTensor",
    "Leg",
    "LegName",
    "TensorChannel",
    "TensorReport",
    "channel_from_tensor",
    "dilate_channel",
    "random_isometric_tensor",
    "validate_tensor",
]
