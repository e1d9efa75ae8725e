"""Spectral projectors P̃(q) on momentum grids and on cylinders."""

from typing import Any, Optional

import numpy as np
import structlog
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.linalg import block_diag

from src.core.correlation import momentum_grid
from src.core.errors import GapClosedError, InvariantViolation
from src.models.lattice import LatticeModel

logger = structlog.get_logger()

PROJECTOR_TOL = 1e-10
GAP_TOL = 1e-3
ZERO_MODE_TOL = 1e-10
EDGE_SHIFT = 0.5


class SpectralProjector(BaseModel):
    """
    Hermitian projectors P̃(q) on a (q_x, q_y) grid, or on q_x alone for a cylinder.

    Responsibilities:
    - Check hermiticity and idempotency at every grid point
    - Check that the rank is the same everywhere
    - Remember how many Majoranas one row of the open direction holds
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    qx: np.ndarray
    qy: Optional[np.ndarray] = None
    matrices: np.ndarray = Field(..., description="(n_x, n_y, d, d) on a torus, (n_x, d, d) on a cylinder")
    site_modes: int = Field(default=1, ge=1, description="Majoranas per row along the open direction")

    @field_validator("matrices", mode="before")
    @classmethod
    def _as_complex(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=complex)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check(self) -> "SpectralProjector":
        expected = 2 if self.qy is None else 3
        P = self.matrices
        if P.ndim != expected + 1 or P.shape[-1] != P.shape[-2]:
            raise ValueError(f"projector stack must have {expected + 1} axes, got shape {P.shape}")
        if P.shape[0] != len(self.qx) or (self.qy is not None and P.shape[1] != len(self.qy)):
            raise ValueError("one projector per grid point is required")

        P_dag = np.conj(np.swapaxes(P, -1, -2))
        hermiticity = float(np.max(np.abs(P - P_dag)))
        if hermiticity > PROJECTOR_TOL:
            raise InvariantViolation("hermiticity", hermiticity, "P̃(q)† ≠ P̃(q)")
        idempotency = float(np.max(np.abs(P @ P - P)))
        if idempotency > PROJECTOR_TOL:
            raise InvariantViolation("idempotency", idempotency, "P̃(q)² ≠ P̃(q)")
        ranks = np.rint(np.trace(P, axis1=-2, axis2=-1).real)
        if np.min(ranks) != np.max(ranks):
            raise InvariantViolation("constant_rank", float(np.max(ranks) - np.min(ranks)), "rank changes over the grid")
        return self

    @property
    def is_cylinder(self) -> bool:
        return self.qy is None

    @property
    def dimension(self) -> int:
        return int(self.matrices.shape[-1])

    @property
    def rank(self) -> int:
        return int(np.rint(np.trace(self.matrices.reshape(-1, self.dimension, self.dimension)[0]).real))

    @property
    def rows(self) -> int:
        return self.dimension // self.site_modes

    def conjugate(self, unitary: np.ndarray) -> "SpectralProjector":
        """U P̃(q) U† with one constant unitary."""
        rotated = unitary @ self.matrices @ np.conj(unitary).T
        return self.model_copy(update={"matrices": rotated})

    def direct_sum(self, other: "SpectralProjector") -> "SpectralProjector":
        if self.matrices.shape[:-2] != other.matrices.shape[:-2]:
            raise ValueError("direct sums need projectors on the same grid")
        flat_a = self.matrices.reshape(-1, self.dimension, self.dimension)
        flat_b = other.matrices.reshape(-1, other.dimension, other.dimension)
        stacked = np.stack([block_diag(a, b) for a, b in zip(flat_a, flat_b)])
        size = self.dimension + other.dimension
        return SpectralProjector(
            qx=self.qx,
            qy=self.qy,
            matrices=stacked.reshape(self.matrices.shape[:-2] + (size, size)),
        )


def _occupied_projector(hamiltonian: np.ndarray):
    values, vectors = np.linalg.eigh(hamiltonian)
    occupied = vectors[:, values < 0.0]
    return occupied @ np.conj(occupied).T, float(np.min(np.abs(values)))


def _row(model: LatticeModel, qx: float, grid: np.ndarray):
    return [_occupied_projector(model.hamiltonian(qx, qy)) for qy in grid]


def model_projector(
    model: LatticeModel,
    nq: int,
    gap_tol: float = GAP_TOL,
    n_jobs: Optional[int] = 1,
) -> SpectralProjector:
    """
    Projector onto the negative-energy modes of iM(q) on the nq × nq grid.

    Raises:
        GapClosedError: if some |ε(q)| falls below gap_tol
    """
    grid = momentum_grid(nq)
    rows = Parallel(n_jobs=n_jobs)(delayed(_row)(model, float(qx), grid) for qx in grid)
    matrices = np.array([[p for p, _ in row] for row in rows])
    gaps = np.array([[g for _, g in row] for row in rows])

    i, j = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
    if gaps[i, j] < gap_tol:
        q = (float(grid[i]), float(grid[j]))
        logger.error("Bulk gap closes", gap=float(gaps[i, j]), q=q)
        raise GapClosedError(float(gaps[i, j]), q)
    logger.debug("Model projector", nq=nq, gap=float(gaps[i, j]))
    return SpectralProjector(qx=grid, qy=grid, matrices=matrices)


def cylinder_projectors(
    model: LatticeModel,
    ly: int,
    nqx: int,
    shift: float = EDGE_SHIFT,
    zero_tol: float = ZERO_MODE_TOL,
    n_jobs: Optional[int] = 1,
) -> SpectralProjector:
    """
    Projectors P(q_x) of the ly-row cylinder on q_x = 2π(j + shift)/nqx.

    Raises:
        GapClosedError: if a sampled q_x carries an exact zero mode
    """
    grid = momentum_grid(nqx, shift)
    results = Parallel(n_jobs=n_jobs)(
        delayed(_occupied_projector)(1j * model.cylinder(float(qx), ly)) for qx in grid
    )
    gaps = np.array([g for _, g in results])
    worst = int(np.argmin(gaps))
    if gaps[worst] < zero_tol:
        raise GapClosedError(float(gaps[worst]), float(grid[worst]), "zero mode makes the filling ambiguous")
    return SpectralProjector(
        qx=grid,
        matrices=np.stack([p for p, _ in results]),
        site_modes=model.orbitals,
    )
