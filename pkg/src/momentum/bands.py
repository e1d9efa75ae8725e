"""Numerical band classification of preserved modes across the momentum grid."""

from typing import List, Optional

import numpy as np
import structlog
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field
from scipy import linalg
from scipy.optimize import linear_sum_assignment

from src.core.errors import ClassificationError
from src.core.linalg import spectral_radius
from src.momentum.channel import MomentumChannel

logger = structlog.get_logger()

TOL_UNIT = 1e-9
LEMMA_TOL = 1e-6
OVERLAP_THRESHOLD = 0.7
SUBSPACE_RCOND = 1e-8


class MatchAmbiguity(BaseModel):
    """A step of the overlap matching that could not be resolved cleanly."""

    k_start: float
    k_end: float
    max_overlap: float = Field(..., description="Largest competing overlap")
    reason: str


class KPointModes(BaseModel):
    """Preserved/dissipative split of B_k at a single momentum."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    unit_eigenvalues: np.ndarray
    unit_vectors: np.ndarray = Field(..., description="Normalised eigenvectors with |b| ≥ 1 - tol")
    Q_u: np.ndarray
    Q_d: np.ndarray
    r: float
    lemma_residual: float

    @property
    def dimension(self) -> int:
        return int(self.Q_u.shape[1])


class BandClassification(BaseModel):
    """
    Preserved-mode structure of a momentum channel.

    Responsibilities:
    - Per-k preserved dimension, projectors and dissipative spectral radius
    - Discrete exceptions where the preserved dimension jumps
    - Band labels following preserved eigenvectors from one k to the next
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    k_grid: np.ndarray
    modes: List[KPointModes]
    generic_dimension: int
    exceptions: List[int] = Field(default_factory=list, description="Grid indices with a different dimension")
    band_labels: np.ndarray = Field(..., description="(L, generic_dimension) eigenvector index per band, -1 at exceptions")
    ambiguities: List[MatchAmbiguity] = Field(default_factory=list)
    r: float = Field(..., description="max r_k away from exceptions")

    @property
    def preserved_dimensions(self) -> np.ndarray:
        return np.array([m.dimension for m in self.modes], dtype=int)

    @property
    def r_k(self) -> np.ndarray:
        return np.array([m.r for m in self.modes])


def _split_modes(A: np.ndarray, B: np.ndarray, tol_unit: float) -> KPointModes:
    size = B.shape[0]
    values, vectors = np.linalg.eig(B)
    unit = np.abs(values) >= 1.0 - tol_unit
    unit_vectors = vectors[:, unit]
    if unit_vectors.size:
        unit_vectors = unit_vectors / np.linalg.norm(unit_vectors, axis=0)
        lemma = float(np.max(np.linalg.norm(A @ unit_vectors, axis=0)))
        Q_u = linalg.orth(unit_vectors, rcond=SUBSPACE_RCOND)
        Q_d = linalg.null_space(np.conj(Q_u).T) if Q_u.shape[1] < size else np.zeros((size, 0), dtype=complex)
    else:
        lemma = 0.0
        Q_u = np.zeros((size, 0), dtype=complex)
        Q_d = np.eye(size, dtype=complex)
    r = spectral_radius(np.conj(Q_d).T @ B @ Q_d)
    return KPointModes(
        unit_eigenvalues=values[unit],
        unit_vectors=unit_vectors,
        Q_u=Q_u,
        Q_d=Q_d,
        r=r,
        lemma_residual=lemma,
    )


def match_columns(
    previous: np.ndarray,
    current: np.ndarray,
    threshold: float = OVERLAP_THRESHOLD,
):
    """
    Maximum-overlap assignment of the columns of `current` to those of `previous`.

    Returns:
        (assignment, ambiguous, weakest): assignment[i] is the column of
        `current` continuing column i of `previous`; `ambiguous` is True when
        some column has two candidates above the threshold; `weakest` is the
        smallest matched overlap.
    """
    overlaps = np.abs(np.conj(previous).T @ current)
    rows, cols = linear_sum_assignment(-overlaps)
    assignment = np.empty(previous.shape[1], dtype=int)
    assignment[rows] = cols
    competing = np.count_nonzero(overlaps > threshold, axis=1)
    ambiguous = bool(np.any(competing > 1))
    weakest = float(np.min(overlaps[rows, cols])) if rows.size else 1.0
    return assignment, ambiguous, weakest


def classify_bands(
    mc: MomentumChannel,
    tol_unit: float = TOL_UNIT,
    overlap_threshold: float = OVERLAP_THRESHOLD,
    n_jobs: Optional[int] = 1,
) -> BandClassification:
    """
    Split every B_k into preserved and dissipative parts and label bands.

    Raises:
        ClassificationError: when exceptions are dense (> √L), adjacent,
            or a regular momentum violates A_k v = 0
    """
    L = mc.length
    modes = Parallel(n_jobs=n_jobs)(
        delayed(_split_modes)(mc.A_k[i], mc.B_k[i], tol_unit) for i in range(L)
    )
    dims = np.array([m.dimension for m in modes], dtype=int)
    generic = int(np.argmax(np.bincount(dims)))
    exceptions = [int(i) for i in np.flatnonzero(dims != generic)]

    if len(exceptions) > np.sqrt(L):
        logger.error("Dense exception set", exceptions=len(exceptions), grid=L)
        raise ClassificationError(
            "exception_density", len(exceptions), f"classification unstable: {len(exceptions)} exceptional momenta"
        )
    exceptional = set(exceptions)
    for i in exceptions:
        if (i + 1) % L in exceptional and L > 1:
            raise ClassificationError(
                "exception_adjacency", 2, f"adjacent exceptional momenta at k={mc.k_grid[i]:.6f}"
            )

    regular = [i for i in range(L) if i not in exceptional]
    for i in regular:
        if modes[i].lemma_residual > LEMMA_TOL:
            raise ClassificationError(
                "lemma", modes[i].lemma_residual, f"A_k v ≠ 0 on a preserved mode at k={mc.k_grid[i]:.6f}"
            )

    labels = -np.ones((L, generic), dtype=int)
    ambiguities: List[MatchAmbiguity] = []
    if generic and regular:
        labels[regular[0]] = np.arange(generic)
        for prev, cur in zip(regular[:-1], regular[1:]):
            previous = modes[prev].unit_vectors[:, labels[prev]]
            assignment, ambiguous, weakest = match_columns(
                previous, modes[cur].unit_vectors, overlap_threshold
            )
            labels[cur] = assignment
            if ambiguous or weakest < overlap_threshold:
                ambiguities.append(MatchAmbiguity(
                    k_start=float(mc.k_grid[prev]),
                    k_end=float(mc.k_grid[cur]),
                    max_overlap=weakest,
                    reason="competing candidates" if ambiguous else "weak overlap",
                ))

    r = max((modes[i].r for i in regular), default=0.0)
    if ambiguities:
        logger.warning("Band matching ambiguities", count=len(ambiguities))
    logger.info(
        "Bands classified",
        grid=L,
        generic_dimension=generic,
        exceptions=len(exceptions),
        spectral_radius=r,
    )
    return BandClassification(
        k_grid=np.array(mc.k_grid),
        modes=modes,
        generic_dimension=generic,
        exceptions=exceptions,
        band_labels=labels,
        ambiguities=ambiguities,
        r=r,
    )
