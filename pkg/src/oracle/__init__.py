"""Brute-force dense oracles."""

from src.oracle.circuit import (
    Gate,
    IsospectralReport,
    SequentialRun,
    TinyCircuit,
    cat_state,
    identity_circuit,
    isospectral_check,
    product_state,
    random_circuit,
    simulate_sequential,
)
from src.oracle.fock import (
    gaussian_consistency,
    gaussian_density_matrix,
    majorana_operators,
    parity_operator,
    state_correlation,
)

__all__ = [
    "Gate",
    "IsospectralReport",
    "SequentialRun",
    "TinyCircuit",
    "cat_state",
    "identity_circuit",
    "isospectral_check",
    "product_state",
    "random_circuit",
    "simulate_sequential",
    "gaussian_consistency",
    "gaussian_density_matrix",
    "majorana_operators",
    "parity_operator",
    "state_correlation",
]
