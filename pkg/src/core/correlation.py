"""Correlation-matrix data structures and models."""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.errors import InvariantViolation

ANTISYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-10
PURITY_TOL = 1e-8
REALITY_TOL = 1e-10
CLAMP_TOL = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def energies_from_lambdas(lambdas: np.ndarray) -> np.ndarray:
    """Map λ ∈ [-1, 1] to ε = log((1+λ)/(1-λ)), clamping |λ| ≥ 1 - 1e-12 to ±inf."""
    lam = np.asarray(lambdas, dtype=float)
    out = np.empty_like(lam)
    upper = lam >= 1.0 - CLAMP_TOL
    lower = lam <= -1.0 + CLAMP_TOL
    finite = ~(upper | lower)
    out[upper] = np.inf
    out[lower] = -np.inf
    out[finite] = np.log1p(lam[finite]) - np.log1p(-lam[finite])
    return out


def momentum_grid(length: int, shift: float = 0.0) -> np.ndarray:
    """Uniform momenta 2π(m + shift)/L in [0, 2π)."""
    return 2.0 * np.pi * (np.arange(length) + shift) / length


def mirror_indices(k_grid: np.ndarray) -> np.ndarray:
    """Index of -k for every k on the grid, -1 where -k is not sampled."""
    k = np.mod(np.asarray(k_grid, dtype=float), 2.0 * np.pi)
    target = np.mod(-k, 2.0 * np.pi)
    index = np.full(k.shape[0], -1, dtype=int)
    for i, value in enumerate(target):
        distance = np.abs(np.angle(np.exp(1j * (k - value))))
        j = int(np.argmin(distance))
        if distance[j] < 1e-9:
            index[i] = j
    return index


class CorrelationMatrix(BaseModel):
    """Real antisymmetric 2n x 2n Majorana correlation matrix of a Gaussian state."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    data: np.ndarray = Field(..., description="Γ_jl = (i/2) Tr(ρ[c_j, c_l])")

    @field_validator("data", mode="before")
    @classmethod
    def _validate_data(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=float)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError(f"correlation matrix must be square, got shape {array.shape}")
        if array.shape[0] % 2:
            raise ValueError(f"Majorana mode count must be even, got {array.shape[0]}")
        if array.size == 0:
            return _frozen(array)

        defect = float(np.max(np.abs(array + array.T)))
        if defect > ANTISYMMETRY_TOL:
            raise InvariantViolation("antisymmetry", defect, "Γᵀ must equal -Γ")
        array = 0.5 * (array - array.T)

        excess = float(np.linalg.norm(array, 2)) - 1.0
        if excess > PHYSICALITY_TOL:
            raise InvariantViolation("physicality", excess, "singular values of Γ exceed 1")
        return _frozen(array)

    @property
    def n_modes(self) -> int:
        return int(self.data.shape[0])

    @property
    def purity_residual(self) -> float:
        if self.n_modes == 0:
            return 0.0
        return float(np.linalg.norm(self.data @ self.data.T - np.eye(self.n_modes), 2))

    @property
    def is_pure(self) -> bool:
        return self.purity_residual <= PURITY_TOL

    def restrict(self, indices) -> "CorrelationMatrix":
        """Correlation matrix of the Majorana subset `indices`."""
        idx = np.asarray(indices, dtype=int)
        return CorrelationMatrix(data=self.data[np.ix_(idx, idx)])

    @classmethod
    def zeros(cls, n_modes: int) -> "CorrelationMatrix":
        return cls(data=np.zeros((n_modes, n_modes)))

    @classmethod
    def vacuum(cls, n_modes: int, sign: float = 1.0) -> "CorrelationMatrix":
        """Product state pairing Majoranas (2j, 2j+1) with Γ_{2j,2j+1} = sign."""
        data = np.zeros((n_modes, n_modes))
        for j in range(0, n_modes, 2):
            data[j, j + 1] = sign
            data[j + 1, j] = -sign
        return cls(data=data)


class MomentumCorrelation(BaseModel):
    """Translation-invariant correlations resolved by momentum: Γ_k = Σ_d e^{-ikd} G(d)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    k_grid: np.ndarray = Field(..., description="Momenta in [0, 2π)")
    blocks: np.ndarray = Field(..., description="Complex blocks Γ_k, shape (L, m, m)")

    @field_validator("k_grid", mode="before")
    @classmethod
    def _validate_grid(cls, value: Any) -> np.ndarray:
        return _frozen(np.array(value, dtype=float).reshape(-1))

    @field_validator("blocks", mode="before")
    @classmethod
    def _validate_blocks(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=complex)
        if array.ndim != 3 or array.shape[1] != array.shape[2]:
            raise ValueError(f"momentum blocks must have shape (L, m, m), got {array.shape}")
        if array.size == 0:
            return _frozen(array)

        scale = max(1.0, float(np.max(np.abs(array))))
        defect = float(np.max(np.abs(array + np.conj(np.swapaxes(array, 1, 2)))))
        if defect > ANTISYMMETRY_TOL * scale:
            raise InvariantViolation("anti-hermiticity", defect, "Γ_k† must equal -Γ_k")
        return _frozen(0.5 * (array - np.conj(np.swapaxes(array, 1, 2))))

    @model_validator(mode="after")
    def _check_invariants(self) -> "MomentumCorrelation":
        blocks = self.blocks
        if blocks.shape[0] != self.k_grid.shape[0]:
            raise ValueError("one block per momentum is required")
        if blocks.size == 0:
            return self

        mirror = mirror_indices(self.k_grid)
        sampled = mirror >= 0
        if np.any(sampled):
            reality = float(np.max(np.abs(np.conj(blocks[sampled]) - blocks[mirror[sampled]])))
            if reality > REALITY_TOL:
                raise InvariantViolation("reality", reality, "Γ_k* must equal Γ_{-k}")

        norms = np.linalg.norm(blocks, ord=2, axis=(1, 2))
        excess = float(np.max(norms)) - 1.0
        if excess > PHYSICALITY_TOL:
            k_bad = float(self.k_grid[int(np.argmax(norms))])
            raise InvariantViolation("physicality", excess, f"Γ_k Γ_k† exceeds I at k={k_bad:.6f}")
        return self

    @property
    def length(self) -> int:
        return int(self.k_grid.shape[0])

    @property
    def cell_modes(self) -> int:
        return int(self.blocks.shape[1])


class EntanglementSpectrum(BaseModel):
    """Single-particle entanglement spectrum, λ descending with ε = log((1+λ)/(1-λ))."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lambdas: np.ndarray = Field(..., description="λ_α ∈ [0, 1], sorted descending")
    energies: np.ndarray = Field(..., description="ε_α in units of the natural log; +inf for λ = 1")
    k: Optional[float] = Field(default=None, description="Momentum label, if resolved")

    @field_validator("lambdas", "energies", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return np.array(value, dtype=float).reshape(-1)

    @model_validator(mode="after")
    def _check_order(self) -> "EntanglementSpectrum":
        lam = self.lambdas
        if lam.shape != self.energies.shape:
            raise ValueError("lambdas and energies must have equal length")
        if lam.size and (np.min(lam) < -CLAMP_TOL or np.max(lam) > 1.0 + CLAMP_TOL):
            raise InvariantViolation("lambda_range", float(np.max(np.abs(lam))), "λ outside [0, 1]")
        if np.any(np.diff(lam) > CLAMP_TOL):
            raise InvariantViolation("lambda_order", float(np.max(np.diff(lam))), "λ not descending")
        _frozen(lam)
        _frozen(self.energies)
        return self

    @classmethod
    def from_lambdas(cls, lambdas, k: Optional[float] = None) -> "EntanglementSpectrum":
        lam = np.clip(np.sort(np.asarray(lambdas, dtype=float))[::-1], 0.0, 1.0)
        return cls(lambdas=lam, energies=energies_from_lambdas(lam), k=k)

    @property
    def mode_count(self) -> int:
        return int(self.lambdas.shape[0])


class BandSpectrum(BaseModel):
    """Momentum-resolved spectrum: signed λ per (k, branch) and ε = log((1+λ)/(1-λ))."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    k_grid: np.ndarray
    lambdas: np.ndarray = Field(..., description="Eigenvalues of -iΓ_k, shape (L, branches)")
    energies: np.ndarray
    exceptional: np.ndarray = Field(..., description="True where a value is clamped or skipped")

    @model_validator(mode="after")
    def _check_shapes(self) -> "BandSpectrum":
        shape = self.lambdas.shape
        if self.energies.shape != shape or self.exceptional.shape != shape:
            raise ValueError("lambdas, energies and exceptional flags must share one shape")
        if shape[0] != self.k_grid.shape[0]:
            raise ValueError("one row per momentum is required")
        return self

    @property
    def branch_count(self) -> int:
        return int(self.lambdas.shape[1])

    def at(self, index: int) -> np.ndarray:
        return self.energies[index]

    def to_rows(self) -> List[Dict[str, Any]]:
        """Rows for the spectrum CSV: k, branch_index, lambda, epsilon, exceptional_flag."""
        rows = []
        for i, k in enumerate(self.k_grid):
            for b in range(self.branch_count):
                rows.append({
                    "k": float(k),
                    "branch_index": b,
                    "lambda": float(self.lambdas[i, b]),
                    "epsilon": float(self.energies[i, b]),
                    "exceptional_flag": int(bool(self.exceptional[i, b])),
                })
        return rows
