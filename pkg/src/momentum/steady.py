"""Per-momentum dissipative steady states."""

from typing import Optional

import numpy as np
import structlog
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field

from src.core.correlation import MomentumCorrelation
from src.core.errors import ClassificationError
from src.core.linalg import anti_hermitian_part, solve_fixed_point
from src.momentum.bands import BandClassification, KPointModes, classify_bands
from src.momentum.channel import MomentumChannel

logger = structlog.get_logger()

FIXED_POINT_TOL = 1e-10


class MomentumSteadyState(BaseModel):
    """Γ_{k,d}^(s) per momentum; exceptional momenta carry zeros and a skip marker."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    correlation: MomentumCorrelation
    skipped: np.ndarray = Field(..., description="True at exceptional momenta")

    @property
    def k_grid(self) -> np.ndarray:
        return self.correlation.k_grid

    @property
    def blocks(self) -> np.ndarray:
        return self.correlation.blocks


def _solve_k(A: np.ndarray, B: np.ndarray, modes: KPointModes):
    Q_d = modes.Q_d
    Q_d_dag = np.conj(Q_d).T
    X, residual = solve_fixed_point(Q_d_dag @ B @ Q_d, Q_d_dag @ A @ Q_d)
    return Q_d @ X @ Q_d_dag, residual


def steady_state_k(
    mc: MomentumChannel,
    bands: Optional[BandClassification] = None,
    n_jobs: Optional[int] = 1,
) -> MomentumSteadyState:
    """
    Solve Γ = P_d A_k P_d + (P_d B_k) Γ (P_d B_k)† at each regular momentum.

    Raises:
        ClassificationError: when the solve fails at a regular momentum
    """
    bands = bands or classify_bands(mc, n_jobs=n_jobs)
    L, m = mc.length, mc.cell_modes
    skipped = np.zeros(L, dtype=bool)
    skipped[bands.exceptions] = True
    regular = [i for i in range(L) if not skipped[i]]

    try:
        solved = Parallel(n_jobs=n_jobs)(
            delayed(_solve_k)(mc.A_k[i], mc.B_k[i], bands.modes[i]) for i in regular
        )
    except np.linalg.LinAlgError as e:
        logger.error("Per-k steady-state solve failed", error=str(e))
        raise ClassificationError("steady_state_solve", float("inf"), str(e)) from e

    blocks = np.zeros((L, m, m), dtype=complex)
    for i, (gamma, residual) in zip(regular, solved):
        if residual > FIXED_POINT_TOL:
            raise ClassificationError(
                "fixed_point", residual, f"per-k steady state not reached at k={mc.k_grid[i]:.6f}"
            )
        blocks[i] = anti_hermitian_part(gamma)

    if skipped.any():
        logger.warning("Exceptional momenta skipped", count=int(skipped.sum()))
    return MomentumSteadyState(
        correlation=MomentumCorrelation(k_grid=mc.k_grid, blocks=blocks),
        skipped=skipped,
    )
