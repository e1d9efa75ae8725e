"""Column contraction of isometric MPS tensors and boundary independence."""

from typing import List, Optional

import numpy as np
import structlog
from pydantic import BaseModel, Field
from scipy.linalg import block_diag

from src.channels.decomposition import ModeDecomposition, decompose_modes
from src.channels.steady import dissipative_fixed_point
from src.core.correlation import CorrelationMatrix
from src.core.linalg import log_linear_slope
from src.isotns.tensor import IsoTensor, TensorChannel, channel_from_tensor

logger = structlog.get_logger()

NOISE_FLOOR = 1e-13
SLOPE_SLACK = 0.1


class BoundaryReport(BaseModel):
    """‖Γ_P(y; Γ_V1) - Γ_P(y; Γ_V2)‖ for y = 1..y_max."""

    differences: List[float]
    slope: Optional[float] = None
    points: int
    spectral_radius: float
    bound: Optional[float] = None
    plateau: bool = Field(..., description="Preserved modes keep boundary information alive")
    passed: bool


def contract_column(t: IsoTensor, boundary: CorrelationMatrix, depth: int) -> CorrelationMatrix:
    """
    Exact correlations of (P_1, ..., P_depth, V_t) after stacking `depth` tensors.

    Each step applies V_b → (P_y, V_t) and leaves earlier physical legs alone.
    """
    tc = channel_from_tensor(t)
    if boundary.n_modes != tc.full.in_modes:
        raise ValueError(f"boundary has {boundary.n_modes} modes, V_b has {tc.full.in_modes}")

    data = np.array(boundary.data)
    for _ in range(depth):
        kept = data.shape[0] - tc.full.in_modes
        A = block_diag(np.zeros((kept, kept)), tc.full.A)
        B = block_diag(np.eye(kept), tc.full.B)
        data = A + B @ data @ B.T
    return CorrelationMatrix(data=0.5 * (data - data.T))


def physical_blocks(t: IsoTensor, boundary: CorrelationMatrix, depth: int) -> List[np.ndarray]:
    """Γ_{P_y} = A_P + B_P Γ_V(y-1) B_Pᵀ for y = 1..depth."""
    tc = channel_from_tensor(t)
    gamma = np.array(boundary.data)
    blocks = []
    for _ in range(depth):
        blocks.append(tc.A_P + tc.B_P @ gamma @ tc.B_P.T)
        gamma = tc.virtual.A + tc.virtual.B @ gamma @ tc.virtual.B.T
    return blocks


def bulk_physical_block(t: IsoTensor, tc: Optional[TensorChannel] = None,
                        dec: Optional[ModeDecomposition] = None) -> np.ndarray:
    """Γ_P,bulk = A_P + B_P Q_d Γ_d^(s) Q_dᵀ B_Pᵀ."""
    tc = tc or channel_from_tensor(t)
    dec = dec or decompose_modes(tc.virtual)
    X = dissipative_fixed_point(dec)
    return tc.A_P + tc.B_P @ dec.Q_d @ X @ dec.Q_d.T @ tc.B_P.T


def boundary_independence(
    t: IsoTensor,
    boundary_1: CorrelationMatrix,
    boundary_2: CorrelationMatrix,
    y_max: int,
    floor: float = NOISE_FLOOR,
    slack: float = SLOPE_SLACK,
) -> BoundaryReport:
    """Decay of the physical-leg difference between two bottom boundaries."""
    tc = channel_from_tensor(t)
    dec = decompose_modes(tc.virtual)

    first = physical_blocks(t, boundary_1, y_max)
    second = physical_blocks(t, boundary_2, y_max)
    differences = [float(np.linalg.norm(a - b, 2)) if a.size else 0.0 for a, b in zip(first, second)]

    depths = np.arange(1, y_max + 1)
    slope, points = log_linear_slope(depths, np.array(differences), floor)
    instant = points < 2
    plateau = dec.preserved_count > 0 and not instant

    if plateau:
        logger.warning("Boundary information survives in preserved modes", preserved=dec.preserved_count)
        bound, passed = None, True
    elif dec.r <= 1e-12:
        bound = None
        limit = dec.dissipative_count + 1
        passed = all(d <= floor for d in differences[limit:])
    else:
        bound = float(np.log(dec.r)) + slack
        passed = instant or slope <= bound

    logger.info("Boundary independence measured", depth=y_max, slope=None if instant else slope, passed=passed)
    return BoundaryReport(
        differences=differences,
        slope=None if instant else slope,
        points=points,
        spectral_radius=dec.r,
        bound=bound,
        plateau=plateau,
        passed=passed,
    )
