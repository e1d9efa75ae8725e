"""Bulk entanglement spectrum per momentum and its continuity certificate."""

from typing import List, Optional, Tuple, Union

import numpy as np
import structlog
from pydantic import BaseModel, Field

from src.core.correlation import BandSpectrum, MomentumCorrelation, energies_from_lambdas
from src.momentum.bands import OVERLAP_THRESHOLD, MatchAmbiguity, match_columns
from src.momentum.steady import MomentumSteadyState

logger = structlog.get_logger()

JUMP_FACTOR = 10.0
ISOLATION_RATIO = 4.0
MIN_JUMP_TOL = 1e-9


class BranchContinuity(BaseModel):
    branch_index: int
    max_jump: float = Field(..., description="Largest inter-grid-point change of ε")
    jump_tol: float
    discontinuities: List[Tuple[float, float]] = Field(
        default_factory=list, description="(k_left, k_right) of isolated jumps above jump_tol"
    )
    sign_crossing: bool = Field(..., description="Some discontinuity changes the sign of ε")
    non_chiral: bool


class ContinuityReport(BaseModel):
    """Continuity of ε branches away from removable points."""

    branches: List[BranchContinuity]
    ambiguities: List[MatchAmbiguity] = Field(default_factory=list)
    excluded_points: int = Field(..., description="Skipped momenta plus clamped values")
    certified: bool = Field(..., description="Every branch is non-chiral")


def _isolated(jumps: np.ndarray, index: int, ratio: float) -> bool:
    count = jumps.shape[0]
    if count < 5:
        return True
    neighbours = [jumps[(index - 2) % count], jumps[(index + 2) % count]]
    finite = [v for v in neighbours if np.isfinite(v)]
    return not finite or jumps[index] > ratio * max(finite)


def bulk_spectrum(
    steady: Union[MomentumSteadyState, MomentumCorrelation],
    skipped: Optional[np.ndarray] = None,
    overlap_threshold: float = OVERLAP_THRESHOLD,
    jump_factor: float = JUMP_FACTOR,
    isolation_ratio: float = ISOLATION_RATIO,
) -> Tuple[BandSpectrum, ContinuityReport]:
    """
    Eigenvalues of h_k = log((I - iΓ_k)/(I + iΓ_k)) with branches followed across k.

    A jump between neighbouring valid momenta counts as a discontinuity when it
    exceeds the branch's jump_tol (jump_factor × median change) and stands out
    against the changes two steps away. A branch is non-chiral when none of
    its discontinuities changes the sign of ε.
    """
    if isinstance(steady, MomentumSteadyState):
        correlation = steady.correlation
        skipped = steady.skipped if skipped is None else skipped
    else:
        correlation = steady
    L, m = correlation.length, correlation.cell_modes
    skipped = np.zeros(L, dtype=bool) if skipped is None else np.asarray(skipped, dtype=bool)

    valid = [i for i in range(L) if not skipped[i]]
    lambdas = np.full((L, m), np.nan)
    vectors = [None] * L
    for i in valid:
        values, vecs = np.linalg.eigh(-1j * correlation.blocks[i])
        lambdas[i] = np.clip(values, -1.0, 1.0)
        vectors[i] = vecs

    ordered = np.full((L, m), np.nan)
    ambiguities: List[MatchAmbiguity] = []
    steps = []
    if valid:
        order = {valid[0]: np.arange(m)}
        pairs = list(zip(valid[:-1], valid[1:]))
        for prev, cur in pairs:
            assignment, ambiguous, weakest = match_columns(
                vectors[prev][:, order[prev]], vectors[cur], overlap_threshold
            )
            order[cur] = assignment
            if ambiguous or weakest < overlap_threshold:
                ambiguities.append(MatchAmbiguity(
                    k_start=float(correlation.k_grid[prev]),
                    k_end=float(correlation.k_grid[cur]),
                    max_overlap=weakest,
                    reason="competing candidates" if ambiguous else "weak overlap",
                ))
            steps.append((prev, cur, np.arange(m)))
        for i in valid:
            ordered[i] = lambdas[i][order[i]]

        if len(valid) > 1:
            last, first = valid[-1], valid[0]
            wrap, _, _ = match_columns(vectors[last][:, order[last]], vectors[first][:, order[first]], overlap_threshold)
            steps.append((last, first, wrap))

    energies = np.full((L, m), np.nan)
    for i in valid:
        energies[i] = energies_from_lambdas(ordered[i])
    exceptional = np.zeros((L, m), dtype=bool)
    exceptional[skipped] = True
    exceptional |= ~np.isfinite(energies)

    branches = []
    for b in range(m):
        jumps = np.full(len(steps), np.nan)
        sides = []
        for s, (left, right, link) in enumerate(steps):
            e_left = energies[left, b]
            e_right = energies[right, link[b]]
            sides.append((left, right, e_left, e_right))
            if np.isfinite(e_left) and np.isfinite(e_right):
                jumps[s] = abs(e_right - e_left)

        finite = jumps[np.isfinite(jumps)]
        median = float(np.median(finite)) if finite.size else 0.0
        jump_tol = max(jump_factor * median, MIN_JUMP_TOL)
        discontinuities = []
        sign_crossing = False
        for s, value in enumerate(jumps):
            if not np.isfinite(value) or value <= jump_tol or not _isolated(jumps, s, isolation_ratio):
                continue
            left, right, e_left, e_right = sides[s]
            discontinuities.append((float(correlation.k_grid[left]), float(correlation.k_grid[right])))
            if e_left * e_right <= 0:
                sign_crossing = True

        branches.append(BranchContinuity(
            branch_index=b,
            max_jump=float(finite.max()) if finite.size else 0.0,
            jump_tol=jump_tol,
            discontinuities=discontinuities,
            sign_crossing=sign_crossing,
            non_chiral=not sign_crossing,
        ))

    report = ContinuityReport(
        branches=branches,
        ambiguities=ambiguities,
        excluded_points=int(np.count_nonzero(exceptional)),
        certified=all(branch.non_chiral for branch in branches),
    )
    spectrum = BandSpectrum(
        k_grid=np.array(correlation.k_grid),
        lambdas=ordered,
        energies=energies,
        exceptional=exceptional,
    )
    if not report.certified:
        logger.warning("Sign-crossing discontinuity detected", branches=sum(not b.non_chiral for b in branches))
    logger.info("Bulk spectrum computed", grid=L, branches=m, ambiguities=len(ambiguities))
    return spectrum, report
