"""Gaussian isometric tensors stored as correlation matrices over their legs."""

from enum import Enum
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.channels.channel import GaussianChannel
from src.core.correlation import CorrelationMatrix
from src.core.errors import InvariantViolation
from src.core.linalg import psd_sqrt
from src.core.random import canonical_block, haar_orthogonal

logger = structlog.get_logger()

PURITY_TOL = 1e-10
ISOMETRIC_TOL = 1e-10


class LegName(str, Enum):
    """Tensor legs in canonical order."""
    P = "P"
    V_R = "V_r"
    V_T = "V_t"
    V_L = "V_l"
    V_B = "V_b"


CANONICAL_ORDER = [LegName.P, LegName.V_R, LegName.V_T, LegName.V_L, LegName.V_B]
INCOMING = {LegName.V_L, LegName.V_B}
MPS_LAYOUT = (LegName.P, LegName.V_T, LegName.V_B)
LIGHTLIKE_LAYOUT = tuple(CANONICAL_ORDER)


class Leg(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: LegName
    modes: int = Field(..., ge=0, description="Majorana count on this leg")


class TensorReport(BaseModel):
    """Outcome of `validate_tensor`."""

    purity_residual: float = Field(..., description="‖ΛᵀΛ - I‖")
    isometric_residuals: Dict[str, float] = Field(..., description="max |Λ| on each incoming diagonal block")
    incoming_residual: float = Field(..., description="max |Λ| on the whole incoming block")
    passed: bool


class IsoTensor(BaseModel):
    """
    Correlation matrix Λ of a Gaussian tensor with labelled legs.

    Responsibilities:
    - Keep legs in the canonical order (P, V_r, V_t, V_l, V_b)
    - Check that Λ is a physical correlation matrix of matching size
    - Hand out leg index ranges and blocks Λ_{ab}
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    legs: List[Leg]
    Lambda: np.ndarray = Field(..., description="Real antisymmetric matrix over all legs")

    @field_validator("Lambda", mode="before")
    @classmethod
    def _physical(cls, value: Any) -> np.ndarray:
        return CorrelationMatrix(data=value).data

    @model_validator(mode="after")
    def _check_layout(self) -> "IsoTensor":
        names = [leg.name for leg in self.legs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate legs in {[n.value for n in names]}")
        positions = [CANONICAL_ORDER.index(n) for n in names]
        if positions != sorted(positions):
            raise ValueError(f"legs must follow the order P, V_r, V_t, V_l, V_b; got {[n.value for n in names]}")
        total = sum(leg.modes for leg in self.legs)
        if total != self.Lambda.shape[0]:
            raise ValueError(f"legs declare {total} modes but Λ has dimension {self.Lambda.shape[0]}")
        return self

    @property
    def names(self) -> Tuple[LegName, ...]:
        return tuple(leg.name for leg in self.legs)

    @property
    def is_mps(self) -> bool:
        return self.names == MPS_LAYOUT

    @property
    def is_lightlike(self) -> bool:
        return self.names == LIGHTLIKE_LAYOUT

    def has(self, name: LegName) -> bool:
        return LegName(name) in self.names

    def indices(self, *names: LegName) -> np.ndarray:
        """Concatenated Λ indices of the given legs, in the order requested."""
        offsets = {}
        start = 0
        for leg in self.legs:
            offsets[leg.name] = np.arange(start, start + leg.modes)
            start += leg.modes
        parts = [offsets[LegName(n)] for n in names if LegName(n) in offsets]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=int)

    def modes(self, name: LegName) -> int:
        return int(self.indices(name).shape[0])

    def block(self, rows: Sequence[LegName], cols: Sequence[LegName]) -> np.ndarray:
        return self.Lambda[np.ix_(self.indices(*rows), self.indices(*cols))]

    def incoming(self) -> List[LegName]:
        return [n for n in self.names if n in INCOMING]

    def outgoing(self) -> List[LegName]:
        return [n for n in self.names if n not in INCOMING]

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "IsoTensor":
        legs = [Leg(name=leg["name"], modes=leg["modes"]) for leg in payload["legs"]]
        return cls(legs=legs, Lambda=payload["Lambda"])


def validate_tensor(t: IsoTensor) -> TensorReport:
    """Purity ΛᵀΛ = I and vanishing incoming blocks."""
    n = t.Lambda.shape[0]
    purity = float(np.linalg.norm(t.Lambda.T @ t.Lambda - np.eye(n), 2)) if n else 0.0

    per_leg = {}
    for name in t.incoming():
        block = t.block([name], [name])
        per_leg[name.value] = float(np.max(np.abs(block))) if block.size else 0.0
    whole = t.block(t.incoming(), t.incoming())
    incoming = float(np.max(np.abs(whole))) if whole.size else 0.0

    passed = purity <= PURITY_TOL and incoming <= ISOMETRIC_TOL
    logger.debug("Tensor validated", purity=purity, incoming=incoming, passed=passed)
    return TensorReport(
        purity_residual=purity,
        isometric_residuals=per_leg,
        incoming_residual=incoming,
        passed=passed,
    )


def require_valid(t: IsoTensor) -> TensorReport:
    report = validate_tensor(t)
    if report.purity_residual > PURITY_TOL:
        raise InvariantViolation("purity", report.purity_residual, "ΛᵀΛ ≠ I")
    if report.incoming_residual > ISOMETRIC_TOL:
        raise InvariantViolation("isometric_form", report.incoming_residual, "incoming legs are correlated")
    return report


class TensorChannel(BaseModel):
    """Channel V_b → (P, V_t) read off an MPS tensor, with its named blocks."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    full: GaussianChannel = Field(..., description="V_b → (P, V_t)")
    virtual: GaussianChannel = Field(..., description="V_b → V_t, A = Λ_{V_t}, B = Λ_{V_tV_b}")
    A_P: np.ndarray
    A_PV: np.ndarray
    B_P: np.ndarray


def channel_from_tensor(t: IsoTensor) -> TensorChannel:
    """
    Identify A_P = Λ_P, A_PV = Λ_{PV_t}, A = Λ_{V_t}, B_P = Λ_{PV_b}, B = Λ_{V_tV_b}.

    Raises:
        ValueError: for a non-MPS layout
        InvariantViolation: when the tensor is not isometric
    """
    if not t.is_mps:
        raise ValueError(f"channel extraction needs legs (P, V_t, V_b), got {[n.value for n in t.names]}")
    require_valid(t)

    P, V_t, V_b = LegName.P, LegName.V_T, LegName.V_B
    full = GaussianChannel(A=t.block([P, V_t], [P, V_t]), B=t.block([P, V_t], [V_b]))
    virtual = GaussianChannel(A=t.block([V_t], [V_t]), B=t.block([V_t], [V_b]))
    return TensorChannel(
        full=full,
        virtual=virtual,
        A_P=t.block([P], [P]),
        A_PV=t.block([P], [V_t]),
        B_P=t.block([P], [V_b]),
    )


def random_isometric_tensor(rng: np.random.Generator, layout: Sequence[Tuple[str, int]]) -> IsoTensor:
    """
    Sample a pure isometric tensor.

    Over (outgoing, incoming) legs Λ = [[V_c J V_cᵀ, V], [-Vᵀ, 0]] with
    [V V_c] Haar orthogonal; the result is reordered to the canonical layout.
    """
    legs = [Leg(name=name, modes=modes) for name, modes in layout]
    legs.sort(key=lambda leg: CANONICAL_ORDER.index(leg.name))
    n_total = sum(leg.modes for leg in legs)
    shell = IsoTensor(legs=legs, Lambda=np.zeros((n_total, n_total)))

    out_idx = shell.indices(*shell.outgoing())
    in_idx = shell.indices(*shell.incoming())
    n_out, n_in = out_idx.shape[0], in_idx.shape[0]
    if n_out < n_in or (n_out - n_in) % 2:
        raise ValueError(f"cannot purify {n_in} incoming into {n_out} outgoing Majoranas")

    frame = haar_orthogonal(rng, n_out)
    V, V_c = frame[:, :n_in], frame[:, n_in:]
    inner = np.zeros((n_out + n_in, n_out + n_in))
    inner[:n_out, :n_out] = V_c @ canonical_block(np.ones((n_out - n_in) // 2)) @ V_c.T
    inner[:n_out, n_out:] = V
    inner[n_out:, :n_out] = -V.T

    order = np.concatenate([out_idx, in_idx])
    Lambda = np.zeros_like(inner)
    Lambda[np.ix_(order, order)] = inner
    return IsoTensor(legs=legs, Lambda=0.5 * (Lambda - Lambda.T))


def dilate_channel(channel: GaussianChannel) -> IsoTensor:
    """
    Purify a channel into an isometric MPS tensor.

    With X = [[A, B], [-Bᵀ, 0]] and S = (I - XᵀX)^{1/2}, the tensor
    Λ = [[-X, -S], [S, X]] carries the environment on P and the channel on
    (V_t, V_b).
    """
    X = channel.dilation
    size = X.shape[0]
    S = psd_sqrt(np.eye(size) - X.T @ X)
    Lambda = np.block([[-X, -S], [S, X]])
    legs = [
        Leg(name=LegName.P, modes=size),
        Leg(name=LegName.V_T, modes=channel.out_modes),
        Leg(name=LegName.V_B, modes=channel.in_modes),
    ]
    return IsoTensor(legs=legs, Lambda=0.5 * (Lambda - Lambda.T))
