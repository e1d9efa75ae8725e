"""Block Fourier transforms between real-space and momentum-space correlations."""

from typing import Union

import numpy as np
import structlog

from src.core.correlation import CorrelationMatrix, MomentumCorrelation, momentum_grid
from src.core.errors import InvariantViolation

logger = structlog.get_logger()

TRANSLATION_TOL = 1e-10
REAL_TOL = 1e-10


def circulant_blocks(matrix: np.ndarray, cell_modes: int, tol: float = TRANSLATION_TOL) -> np.ndarray:
    """
    Extract the distance blocks G(d) of a block-circulant matrix.

    G(d)[α, β] = M[(x+d)·m + α, x·m + β] for every cell x.

    Raises:
        ValueError: if the size is not a multiple of `cell_modes`
        InvariantViolation: if the matrix is not translation invariant,
            naming the worst block distance
    """
    matrix = np.asarray(matrix)
    size = matrix.shape[0]
    if cell_modes <= 0 or size % cell_modes:
        raise ValueError(f"{size} modes cannot be split into cells of {cell_modes}")
    length = size // cell_modes
    m = cell_modes

    grid = matrix.reshape(length, m, length, m).transpose(0, 2, 1, 3)
    distances = np.arange(length)
    per_cell = np.stack([grid[(distances + x) % length, x] for x in range(length)])
    reference = per_cell[0]

    defect = np.max(np.abs(per_cell - reference[None]), axis=(0, 2, 3))
    worst = int(np.argmax(defect))
    if defect[worst] > tol:
        raise InvariantViolation(
            "translation_invariance",
            float(defect[worst]),
            f"block distance d={worst} differs between unit cells",
        )
    return reference


def assemble_circulant(distance_blocks: np.ndarray) -> np.ndarray:
    """Inverse of `circulant_blocks`: build the full matrix from G(d)."""
    blocks = np.asarray(distance_blocks)
    length, m, _ = blocks.shape
    out = np.zeros((length * m, length * m), dtype=blocks.dtype)
    for x in range(length):
        for d in range(length):
            row = ((x + d) % length) * m
            out[row:row + m, x * m:x * m + m] = blocks[d]
    return out


def fourier_blocks(
    real_space: Union[CorrelationMatrix, np.ndarray],
    cell_modes: int,
    tol: float = TRANSLATION_TOL,
) -> MomentumCorrelation:
    """Γ_k = Σ_d e^{-ikd} G(d) on the grid k = 2πm/L."""
    data = real_space.data if isinstance(real_space, CorrelationMatrix) else np.asarray(real_space)
    distance_blocks = circulant_blocks(data, cell_modes, tol=tol)
    length = distance_blocks.shape[0]
    blocks = np.fft.fft(distance_blocks, axis=0)
    logger.debug("Fourier transform", cells=length, cell_modes=cell_modes)
    return MomentumCorrelation(k_grid=momentum_grid(length), blocks=blocks)


def inverse_distance_blocks(blocks: np.ndarray, tol: float = REAL_TOL) -> np.ndarray:
    """G(d) = (1/L) Σ_k e^{ikd} Γ_k, checked to be real."""
    distance_blocks = np.fft.ifft(np.asarray(blocks), axis=0)
    imaginary = float(np.max(np.abs(distance_blocks.imag))) if distance_blocks.size else 0.0
    if imaginary > tol:
        raise InvariantViolation("reality", imaginary, "inverse transform has an imaginary part")
    return distance_blocks.real


def inverse_fourier_blocks(momentum: MomentumCorrelation, tol: float = REAL_TOL) -> CorrelationMatrix:
    """Real-space correlation matrix of a momentum-resolved state on the standard grid."""
    expected = momentum_grid(momentum.length)
    offset = np.abs(np.angle(np.exp(1j * (momentum.k_grid - expected))))
    if offset.size and float(np.max(offset)) > 1e-9:
        raise ValueError("inverse transform requires the grid k = 2πm/L")
    distance_blocks = inverse_distance_blocks(momentum.blocks, tol=tol)
    return CorrelationMatrix(data=assemble_circulant(distance_blocks))
