"""Edge-mode counting from the restricted projector trace Tr P_A(q_x)."""

from typing import Any, Dict, List, Optional

import numpy as np
import structlog
from pydantic import BaseModel

from src.topology.projector import SpectralProjector

logger = structlog.get_logger()

JUMP_THRESHOLD = 0.5
AMBIGUITY_TOL = 0.1


class EdgeJump(BaseModel):
    """Unit jump of Tr P_A between grid points `index` and `index + 1` (cyclic)."""

    index: int
    step: float
    integer: int


class EdgeModeCount(BaseModel):
    nu_edge: int
    cut_row: int
    qx: List[float]
    trace: List[float]
    jumps: List[EdgeJump]
    smooth_total: float
    ambiguous: List[int]

    @property
    def passed(self) -> bool:
        return not self.ambiguous

    def to_rows(self) -> List[Dict[str, Any]]:
        return [{"q_x": q, "trace_P_A": t} for q, t in zip(self.qx, self.trace)]


def _region(proj: SpectralProjector, cut_row: int) -> np.ndarray:
    if not 0 < cut_row < proj.rows:
        raise ValueError(f"cut row must lie strictly inside the {proj.rows} rows, got {cut_row}")
    return np.arange(cut_row * proj.site_modes, proj.dimension)


def trace_curve(proj: SpectralProjector, cut_row: Optional[int] = None) -> np.ndarray:
    """Tr P_A(q_x) for A = rows y ≥ cut_row (upper half by default)."""
    if not proj.is_cylinder:
        raise ValueError("trace curves need a cylinder projector")
    cut_row = proj.rows // 2 if cut_row is None else cut_row
    region = _region(proj, cut_row)
    diagonal = np.diagonal(proj.matrices, axis1=-2, axis2=-1)[:, region]
    return np.sum(diagonal.real, axis=-1)


def _local_slope(steps: np.ndarray, index: int, jumps: np.ndarray) -> float:
    """Mean of the regular steps on either side of `index`, 0 when both are jumps."""
    L = len(steps)
    neighbours = [(index - 1) % L, (index + 1) % L]
    regular = [steps[i] for i in neighbours if i not in jumps and i != index]
    return float(np.mean(regular)) if regular else 0.0


def edge_mode_count(
    proj: SpectralProjector,
    cut_row: Optional[int] = None,
    jump_threshold: float = JUMP_THRESHOLD,
    ambiguity_tol: float = AMBIGUITY_TOL,
) -> EdgeModeCount:
    """
    ν_edge = -∫ (d Tr P_A / dq_x)_smooth dq_x.

    Steps larger than `jump_threshold` between neighbouring q_x (the wrap from
    the last point to the first included) are treated as edge-state jumps. The
    local slope of the bulk part, the mean of the neighbouring regular steps,
    is taken off before rounding; the nearest integer is removed and the rest
    integrated as the smooth part. A jump whose remainder exceeds
    `ambiguity_tol` is reported.
    """
    cut_row = proj.rows // 2 if cut_row is None else cut_row
    trace = trace_curve(proj, cut_row)
    steps = np.roll(trace, -1) - trace

    candidates = np.flatnonzero(np.abs(steps) > jump_threshold)
    jumps: List[EdgeJump] = []
    ambiguous: List[int] = []
    smooth = steps.copy()
    for index in candidates:
        excess = steps[index] - _local_slope(steps, int(index), candidates)
        integer = int(np.rint(excess))
        jumps.append(EdgeJump(index=int(index), step=float(steps[index]), integer=integer))
        smooth[index] -= integer
        if abs(excess - integer) > ambiguity_tol:
            ambiguous.append(int(index))

    smooth_total = float(np.sum(smooth))
    nu_edge = int(np.rint(-smooth_total))
    if ambiguous:
        logger.warning("Non-integer jumps in Tr P_A", indices=ambiguous)
    logger.debug("Edge modes counted", nu_edge=nu_edge, jumps=len(jumps), cut_row=cut_row)
    return EdgeModeCount(
        nu_edge=nu_edge,
        cut_row=cut_row,
        qx=[float(q) for q in proj.qx],
        trace=[float(t) for t in trace],
        jumps=jumps,
        smooth_total=smooth_total,
        ambiguous=ambiguous,
    )
