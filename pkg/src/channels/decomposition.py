"""Preserved / dissipative split of a square Gaussian channel."""

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field
from scipy import linalg

from src.channels.channel import GaussianChannel
from src.core.errors import DecompositionError
from src.core.linalg import spectral_radius

logger = structlog.get_logger()

TOL_UNIT = 1e-9
LEMMA_TOL = 1e-6
ISOMETRY_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-8
SUBSPACE_RCOND = 1e-8


class ModeDecomposition(BaseModel):
    """
    Block structure B = U ⊕ B_d, A = 0 ⊕ A_d of a channel.

    Q_u and Q_d hold orthonormal bases of the preserved and dissipative
    subspaces as columns; the projectors are Q Qᵀ.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    Q_u: np.ndarray = Field(..., description="Preserved basis, 2n x n_u")
    Q_d: np.ndarray = Field(..., description="Dissipative basis, 2n x n_d")
    U: np.ndarray = Field(..., description="Orthogonal action of B on the preserved subspace")
    A_d: np.ndarray
    B_d: np.ndarray
    r: float = Field(..., description="Spectral radius of B_d, 0 when empty")
    unit_eigenvalues: np.ndarray = Field(..., description="Eigenvalues of B with |b| ≥ 1 - tol_unit")
    lemma_residual: float = Field(..., description="max ‖A v‖ over preserved eigenvectors")
    isometry_residual: float = Field(..., description="max ‖BᵀB v - v‖ over preserved eigenvectors")
    commutator_residual: float = Field(..., description="‖B P_u - P_u B‖")

    @property
    def P_u(self) -> np.ndarray:
        return self.Q_u @ self.Q_u.T

    @property
    def P_d(self) -> np.ndarray:
        return self.Q_d @ self.Q_d.T

    @property
    def preserved_count(self) -> int:
        return int(self.Q_u.shape[1])

    @property
    def dissipative_count(self) -> int:
        return int(self.Q_d.shape[1])

    @property
    def odd_preserved(self) -> bool:
        """An odd preserved count forces parity-degenerate entanglement spectra."""
        return self.preserved_count % 2 == 1


def decompose_modes(channel: GaussianChannel, tol_unit: float = TOL_UNIT) -> ModeDecomposition:
    """
    Classify the eigenmodes of B as preserved (|b| ≥ 1 - tol_unit) or dissipative.

    Raises:
        ValueError: for non-square channels
        DecompositionError: when a preserved eigenvector is not annihilated by A
            or not kept isometric by B, the preserved basis is inconsistent,
            or U is not orthogonal
    """
    if not channel.is_square:
        raise ValueError("mode decomposition needs a square channel")
    A, B = channel.A, channel.B
    n = B.shape[0]

    values, vectors = np.linalg.eig(B)
    unit = np.abs(values) >= 1.0 - tol_unit
    unit_vectors = vectors[:, unit]

    lemma = 0.0
    isometry = 0.0
    if unit_vectors.size:
        lemma = float(np.max(np.linalg.norm(A @ unit_vectors, axis=0)))
        isometry = float(np.max(np.linalg.norm(B.T @ B @ unit_vectors - unit_vectors, axis=0)))
    if lemma > LEMMA_TOL:
        logger.error("Preserved mode not annihilated by A", residual=lemma, tol_unit=tol_unit)
        raise DecompositionError("lemma", lemma, "A v ≠ 0 on a unit-norm eigenvector; tol_unit too loose")
    if isometry > ISOMETRY_TOL:
        logger.error("Preserved mode is not isometric", residual=isometry, tol_unit=tol_unit)
        raise DecompositionError("isometry", isometry, "BᵀB v ≠ v on a unit-norm eigenvector; tol_unit too loose")

    if unit_vectors.size:
        Q_u = linalg.orth(np.hstack([unit_vectors.real, unit_vectors.imag]), rcond=SUBSPACE_RCOND)
        if Q_u.shape[1] != int(np.count_nonzero(unit)):
            raise DecompositionError(
                "preserved_subspace",
                abs(Q_u.shape[1] - int(np.count_nonzero(unit))),
                "real span of preserved eigenvectors has the wrong dimension",
            )
        Q_d = linalg.null_space(Q_u.T) if Q_u.shape[1] < n else np.zeros((n, 0))
    else:
        Q_u = np.zeros((n, 0))
        Q_d = np.eye(n)

    U = Q_u.T @ B @ Q_u
    orthogonality = float(np.linalg.norm(U.T @ U - np.eye(U.shape[0]), 2)) if U.size else 0.0
    if orthogonality > ORTHOGONALITY_TOL:
        raise DecompositionError("orthogonality", orthogonality, "U is not orthogonal")

    P_u = Q_u @ Q_u.T
    commutator = float(np.linalg.norm(B @ P_u - P_u @ B, 2))
    if commutator > LEMMA_TOL:
        raise DecompositionError("block_structure", commutator, "B does not preserve the split")

    B_d = Q_d.T @ B @ Q_d
    A_d = Q_d.T @ A @ Q_d
    r = spectral_radius(B_d)
    if r >= 1.0 - tol_unit:
        raise DecompositionError("spectral_radius", r, "dissipative block has a unit-norm eigenvalue")

    logger.info(
        "Modes decomposed",
        preserved=Q_u.shape[1],
        dissipative=Q_d.shape[1],
        spectral_radius=r,
    )
    return ModeDecomposition(
        Q_u=Q_u,
        Q_d=Q_d,
        U=U,
        A_d=0.5 * (A_d - A_d.T),
        B_d=B_d,
        r=r,
        unit_eigenvalues=values[unit],
        lemma_residual=lemma,
        isometry_residual=isometry,
        commutator_residual=commutator,
    )
