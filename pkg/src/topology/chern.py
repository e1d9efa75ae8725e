"""Chern number of a spectral projector from plaquette link products."""

import numpy as np
import structlog

from src.core.errors import GapClosedError, InvariantViolation
from src.topology.projector import GAP_TOL, SpectralProjector

logger = structlog.get_logger()

LINK_TOL = 1e-12
INTEGRALITY_TOL = 1e-6


def _occupied_frames(proj: SpectralProjector, gap_tol: float) -> np.ndarray:
    values, vectors = np.linalg.eigh(proj.matrices)
    distance = np.abs(values - 0.5)
    worst = np.unravel_index(int(np.argmin(np.min(distance, axis=-1))), values.shape[:-1])
    gap = float(np.min(distance[worst]))
    if gap < gap_tol:
        q = (float(proj.qx[worst[0]]), float(proj.qy[worst[1]]))
        logger.error("Projector spectrum reaches 1/2", gap=gap, q=q)
        raise GapClosedError(gap, q)
    rank = proj.rank
    # eigh sorts ascending, so the occupied (≈1) vectors are the last `rank` columns
    return vectors[..., -rank:]


def _links(frames: np.ndarray, axis: int) -> np.ndarray:
    shifted = np.roll(frames, -1, axis=axis)
    overlap = np.conj(np.swapaxes(frames, -1, -2)) @ shifted
    link = np.linalg.det(overlap)
    size = np.abs(link)
    if float(np.min(size)) < LINK_TOL:
        raise InvariantViolation("link_overlap", float(np.min(size)), "grid too coarse for the link method")
    return link / size


def chern_number(proj: SpectralProjector, gap_tol: float = GAP_TOL) -> int:
    """
    ν = (1/2π) Σ_plaquettes arg(U_x(q) U_y(q+x̂) U_x(q+ŷ)* U_y(q)*),
    U_μ(q) = det(V(q)† V(q+μ̂)) for the occupied frame V.

    Raises:
        ValueError: for a cylinder projector
        GapClosedError: if an eigenvalue of P̃(q) comes within gap_tol of 1/2
    """
    if proj.is_cylinder:
        raise ValueError("the Chern number needs a two-dimensional momentum grid")
    if proj.rank == 0:
        return 0

    frames = _occupied_frames(proj, gap_tol)
    u_x = _links(frames, axis=0)
    u_y = _links(frames, axis=1)
    loop = u_x * np.roll(u_y, -1, axis=0) * np.conj(np.roll(u_x, -1, axis=1)) * np.conj(u_y)
    total = float(np.sum(np.angle(loop))) / (2.0 * np.pi)

    nu = int(np.rint(total))
    if abs(total - nu) > INTEGRALITY_TOL:
        raise InvariantViolation("integrality", abs(total - nu), f"plaquette sum {total:.6f}")
    logger.debug("Chern number", nu=nu, grid=proj.matrices.shape[:2])
    return nu
