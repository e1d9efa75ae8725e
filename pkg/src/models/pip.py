"""p+ip superconductor on a cylinder and its cut entanglement spectrum."""

from typing import Optional, Tuple, Union

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field

from src.core.correlation import BandSpectrum, CorrelationMatrix, energies_from_lambdas, mirror_indices
from src.core.fourier import fourier_blocks
from src.models.lattice import LatticeModel, cylinder_ground_state

logger = structlog.get_logger()

PATCH = 3
CLAMP_TOL = 1e-12
ANTISYMMETRY_TOL = 1e-8
CROSSING_TOL = 0.05


class PipLattice(BaseModel):
    """
    Lx × Ly cylinder (periodic x, open y) of the mean-field Hamiltonian

        H = Σ_r (-t a†_r a_{r+x} - t a†_r a_{r+y} - Δ_x a_r a_{r+x} - iΔ_y a_r a_{r+y}) + h.c.
            + μ Σ_r a†_r a_r
    """

    model_config = ConfigDict(frozen=True)

    lx: int = Field(default=24, ge=4)
    ly: int = Field(default=24, ge=4)
    hopping: float = 1.0
    pairing_x: float = 1.0
    pairing_y: float = 1.0
    mu: float = Field(default=2.0, description="Chemical-potential coefficient; 6 puts the model in the trivial phase")

    def model(self) -> LatticeModel:
        return pip_model(self.hopping, self.pairing_x, self.pairing_y, self.mu)


def square_superconductor(tx: float, ty: float, mu: float, pair_x: complex, pair_y: complex) -> LatticeModel:
    """
    Nearest-neighbour single-orbital superconductor

        H = Σ_r Σ_d (-t_d a†_r a_{r+d} - Δ_d a_r a_{r+d}) + h.c. + μ Σ_r a†_r a_r,

    read off a 3 × 3 periodic patch.
    """
    n = PATCH * PATCH
    h = np.zeros((n, n), dtype=complex)
    delta = np.zeros((n, n), dtype=complex)

    def site(x: int, y: int) -> int:
        return (x % PATCH) * PATCH + (y % PATCH)

    # -Δ_d a_r a_{r+d} + h.c. contributes Δ_{r+d,r} = -Δ_d* to ½ Σ Δ_ij a†_i a†_j.
    bonds = (((1, 0), tx, complex(pair_x)), ((0, 1), ty, complex(pair_y)))
    for x in range(PATCH):
        for y in range(PATCH):
            r = site(x, y)
            h[r, r] += mu
            for (dx, dy), t, pair in bonds:
                s = site(x + dx, y + dy)
                h[r, s] -= t
                h[s, r] -= t
                delta[s, r] -= np.conj(pair)
                delta[r, s] += np.conj(pair)
    return LatticeModel.from_quadratic(h, delta, patch=(PATCH, PATCH))


def pip_model(hopping: float = 1.0, pairing_x: float = 1.0, pairing_y: float = 1.0, mu: float = 2.0) -> LatticeModel:
    """Pairing amplitudes (Δ_x, iΔ_y) on top of uniform hopping."""
    return square_superconductor(hopping, hopping, mu, pairing_x, 1j * pairing_y)


class PipGroundState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lattice: PipLattice
    correlation: CorrelationMatrix
    min_energy: float = Field(..., description="Smallest Bogoliubov energy over all q_x")
    unique: bool


def pip_ground_state(lattice: PipLattice, n_jobs: Optional[int] = 1) -> PipGroundState:
    """
    Fill all negative-energy Bogoliubov modes sector by sector in q_x.

    A zero mode at some q_x is logged and reported through `unique`; the
    filling then picks one state of the degenerate subspace.
    """
    state = cylinder_ground_state(lattice.model(), lattice.lx, lattice.ly, n_jobs=n_jobs)
    correlation = state.correlation
    logger.info(
        "p+ip ground state",
        lx=lattice.lx,
        ly=lattice.ly,
        mu=lattice.mu,
        purity_residual=correlation.purity_residual,
        unique=state.unique,
    )
    return PipGroundState(
        lattice=lattice,
        correlation=correlation,
        min_energy=state.min_energy,
        unique=state.unique,
    )


def cut_spectrum(
    gamma: Union[CorrelationMatrix, PipGroundState],
    ly: int,
    y_cut: int,
    site_modes: int = 2,
) -> BandSpectrum:
    """
    Entanglement spectrum of rows y < y_cut, resolved by k_x.

    Each sector yields 2·y_cut signed values λ from -iΓ_A(k_x), including
    the clamped ±1; the spectrum is antisymmetric, ε(k) = -ε(-k).

    Raises:
        ValueError: if the cut is outside 1 ≤ y_cut < ly
        InvariantViolation: if Γ is not translation invariant in x
    """
    if isinstance(gamma, PipGroundState):
        gamma = gamma.correlation
    if not 1 <= y_cut < ly:
        raise ValueError(f"cut row must satisfy 1 ≤ y_cut < {ly}, got {y_cut}")

    momentum = fourier_blocks(gamma, cell_modes=ly * site_modes)
    region = np.arange(y_cut * site_modes)
    restricted = momentum.blocks[:, region[:, None], region[None, :]]
    lambdas = np.linalg.eigvalsh(-1j * restricted)
    lambdas = np.clip(lambdas, -1.0, 1.0)
    energies = energies_from_lambdas(lambdas)
    exceptional = np.abs(lambdas) >= 1.0 - CLAMP_TOL
    logger.debug("Cut spectrum", y_cut=y_cut, sectors=momentum.length, branches=lambdas.shape[1])
    return BandSpectrum(k_grid=momentum.k_grid, lambdas=lambdas, energies=energies, exceptional=exceptional)


def chiral_crossing(spectrum: BandSpectrum) -> Tuple[int, float]:
    """Momentum index where the spectrum comes closest to ε = 0, and that |ε|."""
    closest = np.min(np.abs(spectrum.energies), axis=1)
    index = int(np.argmin(closest))
    return index, float(closest[index])


class CutSpectrumReport(BaseModel):
    """Structural checks of a k-resolved cut spectrum."""

    y_cut: int
    branches: int
    antisymmetry_defect: float = Field(..., description="max |λ(-k) + λ(k)| over sorted branches")
    crossing_k: float = Field(..., description="Grid momentum nearest k = 0")
    crossing_abs_epsilon: float = Field(..., description="min |ε| at crossing_k")
    closest_k: float
    closest_abs_epsilon: float
    passed: bool


def check_cut_spectrum(
    spectrum: BandSpectrum,
    y_cut: int,
    antisymmetry_tol: float = ANTISYMMETRY_TOL,
    crossing_tol: float = CROSSING_TOL,
) -> CutSpectrumReport:
    """
    Branch count 2·y_cut, ε(k) = -ε(-k), and a chiral crossing at the grid
    point nearest k = 0.

    Antisymmetry is compared on λ, where the clamped ±1 stay finite.
    """
    k_grid = np.asarray(spectrum.k_grid)
    mirror = mirror_indices(k_grid)
    sampled = mirror >= 0
    if np.any(sampled):
        mirrored = spectrum.lambdas[mirror[sampled]]
        defect = float(np.max(np.abs(mirrored + spectrum.lambdas[sampled, ::-1])))
    else:
        defect = 0.0

    zero = int(np.argmin(np.abs(np.angle(np.exp(1j * k_grid)))))
    crossing = float(np.min(np.abs(spectrum.energies[zero])))
    closest_index, closest = chiral_crossing(spectrum)

    count_ok = spectrum.branch_count == 2 * y_cut
    passed = count_ok and defect <= antisymmetry_tol and crossing <= crossing_tol
    if not count_ok:
        logger.error("Wrong number of cut branches", branches=spectrum.branch_count, expected=2 * y_cut)
    if defect > antisymmetry_tol:
        logger.error("Cut spectrum is not antisymmetric", defect=defect, tol=antisymmetry_tol)
    if crossing > crossing_tol:
        logger.warning("No chiral crossing at k = 0", abs_epsilon=crossing, tol=crossing_tol)
    return CutSpectrumReport(
        y_cut=y_cut,
        branches=spectrum.branch_count,
        antisymmetry_defect=defect,
        crossing_k=float(k_grid[zero]),
        crossing_abs_epsilon=crossing,
        closest_k=float(k_grid[closest_index]),
        closest_abs_epsilon=closest,
        passed=passed,
    )
