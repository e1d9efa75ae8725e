"""Gaussian fermion channels Γ ↦ A + BΓBᵀ."""

from typing import Any, Optional

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.correlation import ANTISYMMETRY_TOL, CorrelationMatrix
from src.core.errors import InvariantViolation
from src.core.random import haar_orthogonal, random_antisymmetric

logger = structlog.get_logger()

CPTP_TOL = 1e-10
ISOMETRY_TOL = 1e-10


class ChannelReport(BaseModel):
    """Outcome of `validate_channel`."""

    out_modes: int
    in_modes: int
    antisymmetry_defect: float = Field(..., description="max |A + Aᵀ|")
    cptp_excess: float = Field(..., description="largest eigenvalue of ΛᵀΛ minus 1")
    isometric: bool = Field(..., description="ΛᵀΛ = I to 1e-10")
    passed: bool


def dilation_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Λ = [[A, B], [-Bᵀ, 0]] over (output, input) legs."""
    n_in = B.shape[1]
    top = np.hstack([A, B])
    bottom = np.hstack([-B.T, np.zeros((n_in, n_in))])
    return np.vstack([top, bottom])


def validate_channel(A: np.ndarray, B: np.ndarray) -> ChannelReport:
    """
    Check that (A, B) defines a CPTP Gaussian channel.

    Raises:
        ValueError: on dimension mismatch
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if B.ndim != 2 or B.shape[0] != A.shape[0]:
        raise ValueError(f"B must have {A.shape[0]} rows, got shape {B.shape}")

    defect = float(np.max(np.abs(A + A.T))) if A.size else 0.0
    lam = dilation_matrix(A, B)
    gram = lam.T @ lam
    if gram.size:
        excess = float(np.max(np.linalg.eigvalsh(0.5 * (gram + gram.T)))) - 1.0
        isometric = float(np.linalg.norm(gram - np.eye(gram.shape[0]), 2)) <= ISOMETRY_TOL
    else:
        excess, isometric = -1.0, True

    return ChannelReport(
        out_modes=A.shape[0],
        in_modes=B.shape[1],
        antisymmetry_defect=defect,
        cptp_excess=excess,
        isometric=isometric,
        passed=defect <= ANTISYMMETRY_TOL and excess <= CPTP_TOL,
    )


class GaussianChannel(BaseModel):
    """
    Affine channel on Majorana correlation matrices.

    Responsibilities:
    - Hold the pair (A, B), read-only
    - Refuse construction unless A is antisymmetric and ΛᵀΛ ≤ I
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    A: np.ndarray = Field(..., description="Real antisymmetric source term, out x out")
    B: np.ndarray = Field(..., description="Real transfer matrix, out x in")

    @field_validator("A", "B", mode="before")
    @classmethod
    def _as_matrix(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=float)
        if array.ndim != 2:
            raise ValueError(f"channel blocks must be matrices, got shape {array.shape}")
        return array

    @model_validator(mode="after")
    def _check_cptp(self) -> "GaussianChannel":
        report = validate_channel(self.A, self.B)
        if report.antisymmetry_defect > ANTISYMMETRY_TOL:
            raise InvariantViolation("antisymmetry", report.antisymmetry_defect, "A must be antisymmetric")
        if report.cptp_excess > CPTP_TOL:
            raise InvariantViolation("cptp", report.cptp_excess, "ΛᵀΛ exceeds I")
        self.A.setflags(write=False)
        self.B.setflags(write=False)
        return self

    @property
    def out_modes(self) -> int:
        return int(self.A.shape[0])

    @property
    def in_modes(self) -> int:
        return int(self.B.shape[1])

    @property
    def is_square(self) -> bool:
        return self.out_modes == self.in_modes

    @property
    def dilation(self) -> np.ndarray:
        return dilation_matrix(self.A, self.B)

    @classmethod
    def identity(cls, n_modes: int) -> "GaussianChannel":
        return cls(A=np.zeros((n_modes, n_modes)), B=np.eye(n_modes))

    @classmethod
    def reset(cls, target: CorrelationMatrix) -> "GaussianChannel":
        """Channel that discards its input and prepares `target`."""
        n = target.n_modes
        return cls(A=np.array(target.data), B=np.zeros((n, n)))


def apply(channel: GaussianChannel, gamma: CorrelationMatrix, t: int = 1) -> CorrelationMatrix:
    """Return N^t[Γ]; t = 0 is the identity."""
    if t < 0:
        raise ValueError(f"step count must be non-negative, got {t}")
    if gamma.n_modes != channel.in_modes:
        raise ValueError(f"channel expects {channel.in_modes} modes, state has {gamma.n_modes}")
    if t > 1 and not channel.is_square:
        raise ValueError("only square channels can be iterated")

    data = np.array(gamma.data)
    for _ in range(t):
        data = channel.A + channel.B @ data @ channel.B.T
    return CorrelationMatrix(data=0.5 * (data - data.T))


def compose(first: GaussianChannel, second: GaussianChannel) -> GaussianChannel:
    """Channel for `first` followed by `second`: (A₂ + B₂A₁B₂ᵀ, B₂B₁)."""
    if second.in_modes != first.out_modes:
        raise ValueError(
            f"cannot feed {first.out_modes} output modes into a channel expecting {second.in_modes}"
        )
    A = second.A + second.B @ first.A @ second.B.T
    return GaussianChannel(A=0.5 * (A - A.T), B=second.B @ first.B)


def random_channel(
    rng: np.random.Generator,
    n_modes: int,
    s_max: float = 0.9,
    out_modes: Optional[int] = None,
    shrink: float = 0.9,
) -> GaussianChannel:
    """
    Sample a CPTP channel.

    B = U diag(s) Vᵀ with Haar U, V and s ~ U[0, s_max]; A is a random
    antisymmetric matrix scaled by `shrink` until ΛᵀΛ ≤ I.
    """
    if not 0.0 <= s_max <= 1.0:
        raise ValueError(f"s_max must lie in [0, 1], got {s_max}")
    out_modes = n_modes if out_modes is None else out_modes
    rank = min(out_modes, n_modes)

    singular = np.zeros((out_modes, n_modes))
    singular[np.arange(rank), np.arange(rank)] = rng.uniform(0.0, s_max, size=rank)
    B = haar_orthogonal(rng, out_modes) @ singular @ haar_orthogonal(rng, n_modes).T

    A = random_antisymmetric(rng, out_modes)
    norm = float(np.linalg.norm(A, 2)) if A.size else 0.0
    if norm > 0:
        A = A / norm
    while validate_channel(A, B).cptp_excess > CPTP_TOL:
        A = shrink * A

    logger.debug("Random channel sampled", n_modes=n_modes, out_modes=out_modes)
    return GaussianChannel(A=A, B=B)
