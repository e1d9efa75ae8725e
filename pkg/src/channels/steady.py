"""Steady states of Gaussian channels and relaxation towards them."""

from typing import List, Optional

import numpy as np
import structlog
from pydantic import BaseModel, Field

from src.channels.channel import GaussianChannel
from src.channels.decomposition import ModeDecomposition, decompose_modes
from src.core.correlation import CorrelationMatrix
from src.core.errors import DecompositionError
from src.core.linalg import log_linear_slope, solve_fixed_point

logger = structlog.get_logger()

FIXED_POINT_TOL = 1e-10
NOISE_FLOOR = 1e-13
SLOPE_SLACK = 0.1


class ConvergenceReport(BaseModel):
    """Relaxation of ‖N^t[Γ₀] - Γ^(s)(t)‖ with t."""

    residuals: List[float] = Field(..., description="Spectral-norm residual for t = 1..T")
    slope: Optional[float] = Field(default=None, description="Fitted d log(residual)/dt")
    points: int = Field(..., description="Residuals above the noise floor used in the fit")
    spectral_radius: float
    bound: Optional[float] = Field(default=None, description="-ln(1/r) + slack, None when r = 0")
    instant: bool = Field(..., description="Fewer than two residuals above the noise floor")
    passed: bool


def dissipative_fixed_point(dec: ModeDecomposition) -> np.ndarray:
    """Solve Γ_d = A_d + B_d Γ_d B_dᵀ."""
    try:
        X, residual = solve_fixed_point(dec.B_d, dec.A_d)
    except np.linalg.LinAlgError as e:
        logger.error("Steady-state solve failed", error=str(e), spectral_radius=dec.r)
        raise DecompositionError("steady_state_solve", float("inf"), str(e)) from e
    if residual > FIXED_POINT_TOL:
        raise DecompositionError("fixed_point", residual, "dissipative steady state not reached")
    return 0.5 * (X - X.T)


def steady_state_at(
    channel: GaussianChannel,
    dec: ModeDecomposition,
    gamma0: CorrelationMatrix,
    t: int,
) -> CorrelationMatrix:
    """Steady state in the frame of step t: preserved block rotated by U^t."""
    if gamma0.n_modes != channel.in_modes:
        raise ValueError(f"channel expects {channel.in_modes} modes, state has {gamma0.n_modes}")
    X = dissipative_fixed_point(dec)

    rotation = np.linalg.matrix_power(dec.U, t) if dec.U.size else dec.U
    preserved = rotation @ (dec.Q_u.T @ gamma0.data @ dec.Q_u) @ rotation.T
    data = dec.Q_u @ preserved @ dec.Q_u.T + dec.Q_d @ X @ dec.Q_d.T
    return CorrelationMatrix(data=0.5 * (data - data.T))


def steady_state(
    channel: GaussianChannel,
    dec: ModeDecomposition,
    gamma0: CorrelationMatrix,
) -> CorrelationMatrix:
    """Γ^(s) = P_u Γ₀ P_u + Γ_d^(s), the t = 0 frame."""
    return steady_state_at(channel, dec, gamma0, 0)


def convergence_rate(
    channel: GaussianChannel,
    gamma0: CorrelationMatrix,
    T: int,
    dec: Optional[ModeDecomposition] = None,
    floor: float = NOISE_FLOOR,
    slack: float = SLOPE_SLACK,
) -> ConvergenceReport:
    """
    Fit the exponential relaxation rate of a channel.

    The residual at step t is measured against the steady state in the frame
    of step t, so preserved modes do not stall the fit.
    """
    dec = dec or decompose_modes(channel)
    X = dissipative_fixed_point(dec)
    target_dissipative = dec.Q_d @ X @ dec.Q_d.T
    preserved0 = dec.Q_u.T @ gamma0.data @ dec.Q_u

    residuals = []
    data = np.array(gamma0.data)
    rotation = np.eye(dec.U.shape[0])
    for _ in range(T):
        data = channel.A + channel.B @ data @ channel.B.T
        rotation = dec.U @ rotation
        target = dec.Q_u @ (rotation @ preserved0 @ rotation.T) @ dec.Q_u.T + target_dissipative
        residuals.append(float(np.linalg.norm(data - target, 2)))

    steps = np.arange(1, T + 1)
    slope, points = log_linear_slope(steps, np.array(residuals), floor)
    instant = points < 2

    if dec.r <= 1e-12:
        bound = None
        limit = max(dec.dissipative_count, 1) + 1
        passed = all(value <= floor for value in residuals[limit:])
    else:
        bound = float(np.log(dec.r)) + slack
        passed = instant or slope <= bound

    logger.info(
        "Convergence measured",
        steps=T,
        slope=None if instant else slope,
        spectral_radius=dec.r,
        passed=passed,
    )
    return ConvergenceReport(
        residuals=residuals,
        slope=None if instant else slope,
        points=points,
        spectral_radius=dec.r,
        bound=bound,
        instant=instant,
        passed=passed,
    )
