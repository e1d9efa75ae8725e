"""Topological diagnostics of Gaussian states."""

from src.topology.chern import chern_number
from src.topology.edge import EdgeJump, EdgeModeCount, edge_mode_count, trace_curve
from src.topology.projector import (
    SpectralProjector,
    cylinder_projectors,
    model_projector,
)
from src.topology.quasidiag import QuasiDiagonalityReport, decay_profile, quasidiagonality

__all__ = [
    "chern_number",
    "EdgeJump",
    "EdgeModeCount",
    "edge_mode_count",
    "trace_curve",
    "SpectralProjector",
    "cylinder_projectors",
    "model_projector",
    "QuasiDiagonalityReport",
    "decay_profile",
    "quasidiagonality",
]
