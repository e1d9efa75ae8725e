"""Seeded samplers for correlation matrices and orthogonal frames."""

import numpy as np
from scipy.stats import ortho_group, unitary_group

from src.core.correlation import CorrelationMatrix


def haar_orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim == 0:
        return np.zeros((0, 0))
    if dim == 1:
        return np.array([[1.0 if rng.random() < 0.5 else -1.0]])
    return ortho_group.rvs(dim, random_state=rng)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(dim, random_state=rng)


def random_antisymmetric(rng: np.random.Generator, dim: int) -> np.ndarray:
    raw = rng.standard_normal((dim, dim))
    return raw - raw.T


def canonical_block(lambdas: np.ndarray) -> np.ndarray:
    """⊕_j λ_j J with J = [[0, 1], [-1, 0]]."""
    lambdas = np.asarray(lambdas, dtype=float)
    out = np.zeros((2 * lambdas.size, 2 * lambdas.size))
    for j, value in enumerate(lambdas):
        out[2 * j, 2 * j + 1] = value
        out[2 * j + 1, 2 * j] = -value
    return out


def random_correlation(rng: np.random.Generator, n_modes: int, pure: bool = False) -> CorrelationMatrix:
    """Haar-rotated canonical form with λ ~ U[0, 1] (or all ones when `pure`)."""
    if n_modes % 2:
        raise ValueError(f"Majorana mode count must be even, got {n_modes}")
    half = n_modes // 2
    lambdas = np.ones(half) if pure else rng.uniform(0.0, 1.0, size=half)
    frame = haar_orthogonal(rng, n_modes)
    data = frame @ canonical_block(lambdas) @ frame.T
    return CorrelationMatrix(data=0.5 * (data - data.T))
