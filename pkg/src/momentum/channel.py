"""Translation-invariant Gaussian channels resolved by momentum."""

from typing import Any, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.channels.channel import CPTP_TOL, GaussianChannel, compose
from src.core.correlation import REALITY_TOL, mirror_indices, momentum_grid
from src.core.errors import InvariantViolation
from src.core.fourier import circulant_blocks

logger = structlog.get_logger()

ANTI_HERMITIAN_TOL = 1e-10


def _dagger(stack: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(stack, -1, -2))


def momentum_cptp_excess(A_k: np.ndarray, B_k: np.ndarray) -> np.ndarray:
    """Per-k largest eigenvalue of Λ_k†Λ_k minus 1, Λ_k = [[A_k, B_k], [-B_k†, 0]]."""
    length, m, n_in = B_k.shape
    lam = np.zeros((length, m + n_in, m + n_in), dtype=complex)
    lam[:, :m, :m] = A_k
    lam[:, :m, m:] = B_k
    lam[:, m:, :m] = -_dagger(B_k)
    gram = _dagger(lam) @ lam
    return np.max(np.linalg.eigvalsh(0.5 * (gram + _dagger(gram))), axis=1) - 1.0


class MomentumChannel(BaseModel):
    """
    Per-momentum channel Γ_k ↦ A_k + B_k Γ_k B_k†.

    Responsibilities:
    - Hold the sampled blocks (A_k, B_k), read-only
    - Enforce per-k CPTP, anti-hermiticity of A_k and the reality constraint
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    k_grid: np.ndarray = Field(..., description="Momenta in [0, 2π)")
    A_k: np.ndarray = Field(..., description="Source blocks, shape (L, m, m)")
    B_k: np.ndarray = Field(..., description="Transfer blocks, shape (L, m, m)")

    @field_validator("k_grid", mode="before")
    @classmethod
    def _grid(cls, value: Any) -> np.ndarray:
        return np.array(value, dtype=float).reshape(-1)

    @field_validator("A_k", "B_k", mode="before")
    @classmethod
    def _blocks(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=complex)
        if array.ndim != 3:
            raise ValueError(f"momentum blocks must have shape (L, m, m), got {array.shape}")
        return array

    @model_validator(mode="after")
    def _check_invariants(self) -> "MomentumChannel":
        A_k, B_k = self.A_k, self.B_k
        length = self.k_grid.shape[0]
        if A_k.shape[0] != length or B_k.shape[0] != length:
            raise ValueError("one block per momentum is required")
        if A_k.shape[1] != A_k.shape[2] or B_k.shape[1:] != A_k.shape[1:]:
            raise ValueError(f"incompatible block shapes {A_k.shape} and {B_k.shape}")
        if length == 0:
            return self

        anti = float(np.max(np.abs(A_k + _dagger(A_k))))
        if anti > ANTI_HERMITIAN_TOL:
            raise InvariantViolation("anti-hermiticity", anti, "A_k† must equal -A_k")

        excess = momentum_cptp_excess(A_k, B_k)
        worst = int(np.argmax(excess))
        if excess[worst] > CPTP_TOL:
            raise InvariantViolation(
                "cptp", float(excess[worst]), f"Λ_k†Λ_k exceeds I at k={self.k_grid[worst]:.6f}"
            )

        mirror = mirror_indices(self.k_grid)
        sampled = mirror >= 0
        if np.any(sampled):
            reality = max(
                float(np.max(np.abs(np.conj(A_k[sampled]) - A_k[mirror[sampled]]))),
                float(np.max(np.abs(np.conj(B_k[sampled]) - B_k[mirror[sampled]]))),
            )
            if reality > REALITY_TOL:
                raise InvariantViolation("reality", reality, "A_{-k}, B_{-k} must be conjugates of A_k, B_k")

        A_k.setflags(write=False)
        B_k.setflags(write=False)
        return self

    @property
    def length(self) -> int:
        return int(self.k_grid.shape[0])

    @property
    def cell_modes(self) -> int:
        return int(self.A_k.shape[1])

    def at(self, index: int) -> Tuple[np.ndarray, np.ndarray]:
        return self.A_k[index], self.B_k[index]

    @classmethod
    def constant(cls, channel: GaussianChannel, length: int) -> "MomentumChannel":
        """On-site channel acting identically in every unit cell."""
        A_k = np.broadcast_to(channel.A, (length,) + channel.A.shape)
        B_k = np.broadcast_to(channel.B, (length,) + channel.B.shape)
        return cls(k_grid=momentum_grid(length), A_k=A_k, B_k=B_k)

    @classmethod
    def from_realspace(cls, channel: GaussianChannel, cell_modes: int) -> "MomentumChannel":
        """Fourier transform of a translation-invariant real-space channel."""
        A_blocks = circulant_blocks(channel.A, cell_modes)
        B_blocks = circulant_blocks(channel.B, cell_modes)
        length = A_blocks.shape[0]
        return cls(
            k_grid=momentum_grid(length),
            A_k=np.fft.fft(A_blocks, axis=0),
            B_k=np.fft.fft(B_blocks, axis=0),
        )


def compose_momentum(first: MomentumChannel, second: MomentumChannel) -> MomentumChannel:
    """Per-k composition: (A₂ + B₂A₁B₂†, B₂B₁)."""
    if first.length != second.length or not np.allclose(first.k_grid, second.k_grid):
        raise ValueError("momentum channels must share one grid")
    if first.cell_modes != second.cell_modes:
        raise ValueError("momentum channels must share one cell size")
    A_k = second.A_k + second.B_k @ first.A_k @ _dagger(second.B_k)
    return MomentumChannel(
        k_grid=first.k_grid,
        A_k=0.5 * (A_k - _dagger(A_k)),
        B_k=second.B_k @ first.B_k,
    )


def bond_shift(k_grid: np.ndarray, site_modes: int) -> np.ndarray:
    """U_k = [[0, I], [e^{-ik} I, 0]] per momentum."""
    n = site_modes
    U = np.zeros((k_grid.shape[0], 2 * n, 2 * n), dtype=complex)
    U[:, :n, n:] = np.eye(n)
    U[:, n:, :n] = np.exp(-1j * k_grid)[:, None, None] * np.eye(n)
    return U


def build_brickwall(two_site: GaussianChannel, L: int) -> MomentumChannel:
    """
    Two-step brick-wall circuit of a two-site channel on an L-point grid.

    The first step acts inside each cell (a_x, b_x); the second acts on the
    bond (b_{x+1}, a_x), which in momentum space is conjugation by U_k.

    Raises:
        ValueError: for odd L or a two-site channel with an odd mode count
    """
    if L % 2 or L < 2:
        raise ValueError(f"brick-wall grid must be even and positive, got L={L}")
    if not two_site.is_square or two_site.out_modes % 2:
        raise ValueError("two-site channel must be square on 2 x n Majoranas")

    k_grid = momentum_grid(L)
    U = bond_shift(k_grid, two_site.out_modes // 2)
    U_dag = _dagger(U)
    odd = MomentumChannel.constant(two_site, L)
    even = MomentumChannel(
        k_grid=k_grid,
        A_k=U @ two_site.A @ U_dag,
        B_k=U @ two_site.B @ U_dag,
    )
    logger.debug("Brick-wall channel built", grid=L, cell_modes=two_site.out_modes)
    return compose_momentum(odd, even)


def brickwall_realspace(two_site: GaussianChannel, L: int) -> GaussianChannel:
    """The same two-step circuit on L cells in real space, periodic boundary."""
    if L < 2:
        raise ValueError(f"need at least two cells, got L={L}")
    n = two_site.out_modes // 2
    cell = 2 * n
    size = L * cell

    A_odd = np.zeros((size, size))
    B_odd = np.zeros((size, size))
    A_even = np.zeros((size, size))
    B_even = np.zeros((size, size))
    for x in range(L):
        inside = np.arange(x * cell, (x + 1) * cell)
        A_odd[np.ix_(inside, inside)] = two_site.A
        B_odd[np.ix_(inside, inside)] = two_site.B

        first = ((x + 1) % L) * cell + n + np.arange(n)
        second = x * cell + np.arange(n)
        bond = np.concatenate([first, second])
        A_even[np.ix_(bond, bond)] = two_site.A
        B_even[np.ix_(bond, bond)] = two_site.B

    return compose(GaussianChannel(A=A_odd, B=B_odd), GaussianChannel(A=A_even, B=B_even))
