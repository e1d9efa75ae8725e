"""Entanglement and many-body spectra of Gaussian states."""

import heapq
from typing import Tuple, Union

import numpy as np
import structlog
from scipy import linalg

from src.core.correlation import CorrelationMatrix, EntanglementSpectrum

logger = structlog.get_logger()

PAIRING_TOL = 1e-10

MatrixLike = Union[CorrelationMatrix, np.ndarray]


def as_correlation(gamma: MatrixLike) -> CorrelationMatrix:
    """Coerce an array into a validated CorrelationMatrix."""
    if isinstance(gamma, CorrelationMatrix):
        return gamma
    return CorrelationMatrix(data=gamma)


def canonical_form(gamma: MatrixLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Block-diagonalise Γ with a real Schur decomposition.

    Returns:
        (O, λ) with O orthogonal, λ descending and Γ = O (⊕_j λ_j J) Oᵀ,
        J = [[0, 1], [-1, 0]].
    """
    gamma = as_correlation(gamma)
    n = gamma.n_modes
    if n == 0:
        return np.zeros((0, 0)), np.zeros(0)

    T, Z = linalg.schur(gamma.data, output="real")
    pairs = []
    zeros = []
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > PAIRING_TOL:
            value = float(np.sqrt(abs(T[i, i + 1] * T[i + 1, i])))
            first, second = Z[:, i], Z[:, i + 1]
            if T[i, i + 1] < 0:
                first, second = second, first
            pairs.append((value, first, second))
            i += 2
        else:
            zeros.append(Z[:, i])
            i += 1

    for j in range(0, len(zeros), 2):
        pairs.append((0.0, zeros[j], zeros[j + 1]))

    pairs.sort(key=lambda item: -item[0])
    lambdas = np.clip(np.array([p[0] for p in pairs]), 0.0, 1.0)
    columns = []
    for _, first, second in pairs:
        columns.extend([first, second])
    return np.column_stack(columns), lambdas


def entanglement_spectrum(gamma: MatrixLike) -> EntanglementSpectrum:
    """Return the n_modes/2 pairing values λ_α and their energies ε_α."""
    _, lambdas = canonical_form(gamma)
    spectrum = EntanglementSpectrum.from_lambdas(lambdas)
    logger.debug("Entanglement spectrum computed", modes=spectrum.mode_count)
    return spectrum


def many_body_spectrum(spectrum: EntanglementSpectrum, top_m: int) -> np.ndarray:
    """
    Largest eigenvalues of the Gaussian density matrix.

    Each eigenvalue is a product over modes of (1 ± λ_α)/2. The values are
    enumerated best-first, so only `top_m` products are ever formed.

    Args:
        spectrum: single-particle entanglement spectrum
        top_m: number of eigenvalues requested (clamped to 2^modes)

    Returns:
        Descending array of probabilities.
    """
    if top_m < 1:
        raise ValueError(f"top_m must be at least 1, got {top_m}")

    lam = np.clip(spectrum.lambdas, 0.0, 1.0)
    n = lam.shape[0]
    if n < 63:
        top_m = min(top_m, 2 ** n)

    high = (1.0 + lam) / 2.0
    ratios = np.sort((1.0 - lam) / (1.0 + lam))[::-1]
    best = float(np.prod(high))

    results = [best]
    heap = []
    if n:
        heapq.heappush(heap, (-best * ratios[0], 0, best))
    while len(results) < top_m and heap:
        neg_value, last, base = heapq.heappop(heap)
        value = -neg_value
        results.append(value)
        if last + 1 < n:
            heapq.heappush(heap, (-value * ratios[last + 1], last + 1, value))
            heapq.heappush(heap, (-base * ratios[last + 1], last + 1, base))
    return np.array(results)


def occupations(spectrum: EntanglementSpectrum) -> np.ndarray:
    """Mode occupations p = e^{-ε}/(1 + e^{-ε}) = (1 - λ)/2."""
    return (1.0 - spectrum.lambdas) / 2.0


def entanglement_entropy(spectrum: EntanglementSpectrum) -> float:
    """Von Neumann entropy in nats."""
    p = np.clip((1.0 + spectrum.lambdas) / 2.0, 0.0, 1.0)
    q = 1.0 - p
    terms = np.zeros_like(p)
    mask = (p > 0) & (q > 0)
    terms[mask] = -p[mask] * np.log(p[mask]) - q[mask] * np.log(q[mask])
    return float(np.sum(terms))


def spectral_projector(gamma: Union[MatrixLike, np.ndarray]) -> np.ndarray:
    """P = (I + iΓ)/2, applied to a matrix or to a stack of momentum blocks."""
    data = gamma.data if isinstance(gamma, CorrelationMatrix) else np.asarray(gamma)
    eye = np.eye(data.shape[-1])
    return 0.5 * (eye + 1j * data)
