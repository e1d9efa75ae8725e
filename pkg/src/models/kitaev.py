"""Kitaev-chain fixed point as a Majorana-swapping channel, with parity checks."""

from typing import List, Optional

import numpy as np
import structlog
from pydantic import BaseModel, Field

from src.channels.channel import GaussianChannel
from src.core.correlation import CorrelationMatrix
from src.isotns.mps import contract_column
from src.isotns.tensor import IsoTensor, Leg, LegName
from src.oracle.fock import even_sector, gaussian_density_matrix

logger = structlog.get_logger()

MAX_CHAIN = 8

# Majorana order inside the tensor: P = (p1, p2), V_t = (t1, t2), V_b = (b1, b2)
P1, P2, T1, T2, B1, B2 = range(6)


def kitaev_channel() -> GaussianChannel:
    """Keeps virtual Majorana 1, replaces Majorana 2 with a fresh one: B = diag(1, 0), A = 0."""
    return GaussianChannel(A=np.zeros((2, 2)), B=np.diag([1.0, 0.0]))


def _pairing_tensor(pairs) -> IsoTensor:
    Lambda = np.zeros((6, 6))
    for first, second in pairs:
        Lambda[first, second] = 1.0
        Lambda[second, first] = -1.0
    legs = [
        Leg(name=LegName.P, modes=2),
        Leg(name=LegName.V_T, modes=2),
        Leg(name=LegName.V_B, modes=2),
    ]
    return IsoTensor(legs=legs, Lambda=Lambda)


def kitaev_tensor() -> IsoTensor:
    """
    Isometric tensor of the Kitaev fixed point.

    b1 passes straight to t1, the other incoming Majorana b2 is swapped into
    the physical p1, and the fresh t2 is paired with p2.
    """
    return _pairing_tensor([(T1, B1), (P1, B2), (P2, T2)])


def trivial_tensor() -> IsoTensor:
    """Reset counterpart (B = 0): both incoming Majoranas land on P, V_t starts fresh."""
    return _pairing_tensor([(P1, B1), (P2, B2), (T1, T2)])


class ParitySpectra(BaseModel):
    """Spectrum of ρ_A split by the fermion parity of A, each sorted descending."""

    chain_length: int
    even: List[float]
    odd: List[float]
    mismatch: float = Field(..., description="max |even - odd| after zero padding")


def parity_spectra(chain_length: int, tensor: Optional[IsoTensor] = None) -> ParitySpectra:
    """
    Dense parity-resolved spectrum of the first ⌊N/2⌋ sites of an N-site chain.

    The chain is the column of `tensor` (Kitaev by default) grown from a pure
    boundary state on V_b.

    Raises:
        ValueError: for chain_length < 2 or > 8
    """
    if not 2 <= chain_length <= MAX_CHAIN:
        raise ValueError(f"chain length must lie in [2, {MAX_CHAIN}], got {chain_length}")
    tensor = tensor or kitaev_tensor()

    column = contract_column(tensor, CorrelationMatrix.vacuum(2), depth=chain_length)
    sites = chain_length // 2
    reduced = column.restrict(np.arange(2 * sites))
    rho = gaussian_density_matrix(reduced)

    mask = even_sector(sites)
    even = np.sort(np.linalg.eigvalsh(rho[np.ix_(mask, mask)]))[::-1]
    odd = np.sort(np.linalg.eigvalsh(rho[np.ix_(~mask, ~mask)]))[::-1]
    size = max(even.size, odd.size)
    mismatch = float(np.max(np.abs(np.pad(even, (0, size - even.size)) - np.pad(odd, (0, size - odd.size)))))

    logger.debug("Parity spectra", chain_length=chain_length, mismatch=mismatch)
    return ParitySpectra(chain_length=chain_length, even=even.tolist(), odd=odd.tolist(), mismatch=mismatch)
