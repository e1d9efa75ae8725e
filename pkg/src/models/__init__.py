"""Concrete models: p+ip superconductor, Kitaev chain, random two-band superconductors."""

from src.models.kitaev import ParitySpectra, kitaev_channel, kitaev_tensor, parity_spectra, trivial_tensor
from src.models.lattice import (
    CylinderGroundState,
    LatticeModel,
    bulk_gap,
    cylinder_ground_state,
    majorana_form,
)
from src.models.pip import (
    PipGroundState,
    PipLattice,
    chiral_crossing,
    cut_spectrum,
    pip_ground_state,
    pip_model,
    square_superconductor,
)
from src.models.two_band import random_two_band_model

__all__ = [
    "ParitySpectra",
    "kitaev_channel",
    "kitaev_tensor",
    "parity_spectra",
    "trivial_tensor",
    "CylinderGroundState",
    "LatticeModel",
    "bulk_gap",
    "cylinder_ground_state",
    "majorana_form",
    "PipGroundState",
    "PipLattice",
    "chiral_crossing",
    "cut_spectrum",
    "pip_ground_state",
    "pip_model",
    "square_superconductor",
    "random_two_band_model",
]
