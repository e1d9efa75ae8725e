"""Dense linear-algebra helpers shared by the channel solvers."""

from typing import Tuple

import numpy as np
import structlog
from scipy import linalg

logger = structlog.get_logger()

# Above this size the Kronecker system gets too large; fall back to the
# Bartels-Stewart style solver.
KRON_MAX_SIZE = 24


def solve_fixed_point(B: np.ndarray, A: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Solve X = B X B† + A.

    Small systems are solved exactly as (I - B ⊗ B̄) vec(X) = vec(A) in
    row-major vectorisation; larger ones go through
    `scipy.linalg.solve_discrete_lyapunov`.

    Returns:
        (X, residual) with residual = max |X - B X B† - A|.

    Raises:
        numpy.linalg.LinAlgError: when the system is singular.
    """
    B = np.asarray(B)
    A = np.asarray(A)
    n = A.shape[0]
    if n == 0:
        return np.zeros_like(A), 0.0

    if n <= KRON_MAX_SIZE:
        system = np.eye(n * n) - np.kron(B, np.conj(B))
        X = np.linalg.solve(system, A.reshape(-1)).reshape(n, n)
    else:
        X = linalg.solve_discrete_lyapunov(B, A)

    if not (np.iscomplexobj(A) or np.iscomplexobj(B)):
        X = np.real(X)
    residual = float(np.max(np.abs(X - B @ X @ np.conj(B).T - A)))
    return X, residual


def spectral_radius(matrix: np.ndarray) -> float:
    """Largest eigenvalue modulus, 0 for an empty matrix."""
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


def antisymmetric_part(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix - matrix.T)


def anti_hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix - np.conj(np.swapaxes(matrix, -1, -2)))


def psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Square root of a symmetric positive semidefinite matrix, clipping round-off negatives."""
    values, vectors = np.linalg.eigh(0.5 * (matrix + np.conj(matrix).T))
    values = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * values) @ np.conj(vectors).T


def log_linear_slope(x: np.ndarray, y: np.ndarray, floor: float) -> Tuple[float, int]:
    """
    Least-squares slope of log(y) against x over points with y above `floor`.

    Returns:
        (slope, points used); slope is NaN when fewer than two points remain.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = y > floor
    if np.count_nonzero(mask) < 2:
        return float("nan"), int(np.count_nonzero(mask))
    slope, _ = np.polyfit(x[mask], np.log(y[mask]), 1)
    return float(slope), int(np.count_nonzero(mask))
