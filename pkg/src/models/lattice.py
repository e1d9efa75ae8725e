"""Translation-invariant Majorana hopping models on the square lattice."""

from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import structlog
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.correlation import CorrelationMatrix, MomentumCorrelation, momentum_grid
from src.core.errors import InvariantViolation
from src.core.fourier import inverse_fourier_blocks
from src.core.random import canonical_block
from src.core.spectrum import canonical_form

logger = structlog.get_logger()

HERMITICITY_TOL = 1e-12
ZERO_MODE_TOL = 1e-10

Displacement = Tuple[int, int]


def majorana_weights(n_fermions: int) -> np.ndarray:
    """W with a = W c, a_j = (c_{2j} + i c_{2j+1})/2."""
    W = np.zeros((n_fermions, 2 * n_fermions), dtype=complex)
    for j in range(n_fermions):
        W[j, 2 * j] = 0.5
        W[j, 2 * j + 1] = 0.5j
    return W


def majorana_form(h: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """
    Real antisymmetric M with H = (i/4) Σ M_ab c_a c_b + const for
    H = Σ a†_i h_ij a_j + ½ Σ (Δ_ij a†_i a†_j + h.c.).

    Raises:
        ValueError: for non-hermitian h, non-antisymmetric Δ or a complex M
    """
    h = np.asarray(h, dtype=complex)
    delta = np.asarray(delta, dtype=complex)
    if h.shape != delta.shape or h.shape[0] != h.shape[1]:
        raise ValueError(f"h and Δ must be equal square matrices, got {h.shape} and {delta.shape}")
    if np.max(np.abs(h - np.conj(h).T), initial=0.0) > HERMITICITY_TOL:
        raise ValueError("hopping matrix h must be hermitian")
    if np.max(np.abs(delta + delta.T), initial=0.0) > HERMITICITY_TOL:
        raise ValueError("pairing matrix Δ must be antisymmetric")

    W = majorana_weights(h.shape[0])
    W_dag = np.conj(W).T
    K = W_dag @ h @ W + 0.5 * W_dag @ delta @ np.conj(W) - 0.5 * W.T @ np.conj(delta) @ W
    M = -2j * (K - K.T)
    if np.max(np.abs(M.imag), initial=0.0) > HERMITICITY_TOL:
        raise ValueError("quadratic form does not map to a real Majorana matrix")
    return M.real


class LatticeModel(BaseModel):
    """
    Quadratic Majorana Hamiltonian H = (i/4) Σ_{r,d} c_{r+d}ᵀ M(d) c_r.

    Responsibilities:
    - Hold the hopping blocks M(dx, dy), with M(-d) = -M(d)ᵀ
    - Build Bloch matrices iM(q) and mixed-space cylinder matrices iM(q_x)
    - Read models from quadratic forms on a small periodic patch or from JSON
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    orbitals: int = Field(..., ge=2, description="Majoranas per site")
    blocks: Dict[Displacement, np.ndarray]

    @field_validator("orbitals")
    @classmethod
    def _even(cls, value: int) -> int:
        if value % 2:
            raise ValueError(f"Majorana count per site must be even, got {value}")
        return value

    @model_validator(mode="after")
    def _check_blocks(self) -> "LatticeModel":
        m = self.orbitals
        for d, block in self.blocks.items():
            if block.shape != (m, m):
                raise ValueError(f"block {d} must be {m}x{m}, got {block.shape}")
            partner = self.blocks.get((-d[0], -d[1]), np.zeros((m, m)))
            defect = float(np.max(np.abs(block + partner.T)))
            if defect > HERMITICITY_TOL:
                raise InvariantViolation("hermiticity", defect, f"M{(-d[0], -d[1])} ≠ -M{d}ᵀ")
        return self

    @property
    def reach(self) -> int:
        return max((max(abs(dx), abs(dy)) for dx, dy in self.blocks), default=0)

    def bloch(self, qx: float, qy: float) -> np.ndarray:
        """M(q) = Σ_d e^{-iq·d} M(d)."""
        out = np.zeros((self.orbitals, self.orbitals), dtype=complex)
        for (dx, dy), block in self.blocks.items():
            out += np.exp(-1j * (qx * dx + qy * dy)) * block
        return out

    def hamiltonian(self, qx: float, qy: float) -> np.ndarray:
        """Hermitian single-particle matrix iM(q)."""
        return 1j * self.bloch(qx, qy)

    def cylinder(self, qx: float, ly: int) -> np.ndarray:
        """M(q_x) on ly open rows; row y occupies Majoranas [y·m, (y+1)·m)."""
        m = self.orbitals
        out = np.zeros((ly * m, ly * m), dtype=complex)
        for (dx, dy), block in self.blocks.items():
            phase = np.exp(-1j * qx * dx)
            for y in range(max(0, -dy), min(ly, ly - dy)):
                target = y + dy
                out[target * m:(target + 1) * m, y * m:(y + 1) * m] += phase * block
        return out

    @classmethod
    def from_quadratic(
        cls,
        h: np.ndarray,
        delta: np.ndarray,
        patch: Tuple[int, int],
        fermions_per_site: int = 1,
    ) -> "LatticeModel":
        """
        Read M(d) off a quadratic form written on a periodic px × py patch.

        Site (x, y) holds fermions (x·py + y)·f .. +f-1. The patch must be at
        least 2·reach + 1 wide in both directions.
        """
        px, py = patch
        M = majorana_form(h, delta)
        m = 2 * fermions_per_site
        if M.shape[0] != px * py * m:
            raise ValueError(f"patch {px}x{py} with {fermions_per_site} fermions/site needs {px * py * m} Majoranas")

        def site(x: int, y: int) -> slice:
            s = (x % px) * py + (y % py)
            return slice(s * m, (s + 1) * m)

        blocks = {}
        for dx in range(-(px // 2), px // 2 + 1):
            for dy in range(-(py // 2), py // 2 + 1):
                block = M[site(dx, dy), site(0, 0)]
                if np.max(np.abs(block)) > 0.0:
                    blocks[(dx, dy)] = block.copy()
        return cls(orbitals=m, blocks=blocks)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "LatticeModel":
        """{"orbitals": m, "blocks": [{"dx": int, "dy": int, "matrix": [[...]]}]}"""
        blocks = {}
        for entry in payload["blocks"]:
            key = (int(entry["dx"]), int(entry["dy"]))
            blocks[key] = blocks.get(key, 0.0) + np.array(entry["matrix"], dtype=float)
        return cls(orbitals=int(payload["orbitals"]), blocks=blocks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "orbitals": self.orbitals,
            "blocks": [
                {"dx": dx, "dy": dy, "matrix": block.tolist()}
                for (dx, dy), block in sorted(self.blocks.items())
            ],
        }


def bulk_gap(model: LatticeModel, nq: int) -> Tuple[float, Tuple[float, float]]:
    """Smallest |ε(q)| of iM(q) on the nq × nq grid and where it occurs."""
    grid = momentum_grid(nq)
    best, where = np.inf, (0.0, 0.0)
    for qx in grid:
        for qy in grid:
            gap = float(np.min(np.abs(np.linalg.eigvalsh(model.hamiltonian(qx, qy)))))
            if gap < best:
                best, where = gap, (float(qx), float(qy))
    return best, where


class CylinderSector(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    qx: float
    gamma: np.ndarray
    min_energy: float


def _ground_sector(model: LatticeModel, qx: float, ly: int, self_conjugate: bool) -> CylinderSector:
    M = model.cylinder(qx, ly)
    if self_conjugate:
        real = M.real
        scale = float(np.linalg.norm(real, 2)) or 1.0
        frame, energies = canonical_form(real / scale)
        gamma = -(frame @ canonical_block(np.ones(energies.size)) @ frame.T)
        return CylinderSector(qx=qx, gamma=gamma.astype(complex), min_energy=float(np.min(energies)) * scale)

    values, vectors = np.linalg.eigh(1j * M)
    occupied = vectors[:, values < 0.0]
    projector = occupied @ np.conj(occupied).T
    gamma = 1j * (np.eye(M.shape[0]) - 2.0 * projector)
    return CylinderSector(qx=qx, gamma=gamma, min_energy=float(np.min(np.abs(values))))


class CylinderGroundState(BaseModel):
    """Ground state on an Lx × Ly cylinder, periodic in x and open in y."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lx: int
    ly: int
    momentum: MomentumCorrelation
    min_energy: float
    degenerate_momenta: List[float]

    @property
    def unique(self) -> bool:
        return not self.degenerate_momenta

    @property
    def correlation(self) -> CorrelationMatrix:
        return inverse_fourier_blocks(self.momentum)


def cylinder_ground_state(
    model: LatticeModel,
    lx: int,
    ly: int,
    zero_tol: float = ZERO_MODE_TOL,
    n_jobs: Optional[int] = 1,
) -> CylinderGroundState:
    """
    Fill every negative-energy mode of iM(q_x), one q_x sector at a time.

    Sectors q and -q are related by complex conjugation, so only half the
    grid is diagonalised; q = 0 and q = π are handled in the real Majorana
    basis so that their blocks stay real even with near-degenerate edge pairs.
    """
    grid = momentum_grid(lx)
    half = [j for j in range(lx) if j <= lx - j]
    sectors = Parallel(n_jobs=n_jobs)(
        delayed(_ground_sector)(model, float(grid[j]), ly, j == 0 or 2 * j == lx) for j in half
    )

    blocks = np.zeros((lx, ly * model.orbitals, ly * model.orbitals), dtype=complex)
    for j, sector in zip(half, sectors):
        blocks[j] = sector.gamma
        blocks[(lx - j) % lx] = np.conj(sector.gamma)
        if j == 0 or 2 * j == lx:
            blocks[j] = sector.gamma.real

    degenerate = [s.qx for s in sectors if s.min_energy < zero_tol]
    min_energy = min(s.min_energy for s in sectors)
    if degenerate:
        logger.warning("Zero-energy modes, ground state is not unique", momenta=degenerate, min_energy=min_energy)
    logger.info("Cylinder ground state filled", lx=lx, ly=ly, min_energy=min_energy)
    return CylinderGroundState(
        lx=lx,
        ly=ly,
        momentum=MomentumCorrelation(k_grid=grid, blocks=blocks),
        min_energy=min_energy,
        degenerate_momenta=degenerate,
    )
