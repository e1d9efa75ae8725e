"""Light-like contraction of 4-leg isometric tensors."""

from typing import List, Optional, Tuple

import numpy as np
import structlog
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict

from src.core.correlation import momentum_grid
from src.core.fourier import circulant_blocks
from src.isotns.tensor import IsoTensor, LegName, require_valid
from src.momentum.channel import MomentumChannel

logger = structlog.get_logger()

CONDITION_MAX = 1e12
DETOUR = 1e-6

R, T, L, B = LegName.V_R, LegName.V_T, LegName.V_L, LegName.V_B


class LightlikeSample(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    k: float
    A_k: np.ndarray
    B_k: np.ndarray
    flagged: bool = False


def _require_lightlike(t: IsoTensor) -> None:
    if not t.is_lightlike:
        raise ValueError(f"light-like contraction needs legs (P, V_r, V_t, V_l, V_b), got {[n.value for n in t.names]}")
    if t.modes(R) != t.modes(L):
        raise ValueError(f"V_r ({t.modes(R)}) and V_l ({t.modes(L)}) must match")


def _closed_form(t: IsoTensor, k: float) -> Tuple[np.ndarray, np.ndarray, float]:
    n = t.modes(R)
    R_rl = t.block([R], [L])
    resolvent = np.exp(-1j * k) * np.eye(n) - R_rl.T
    condition = float(np.linalg.cond(resolvent)) if n else 1.0
    Q = np.linalg.inv(resolvent) if n else np.zeros((0, 0))
    W = np.linalg.solve(np.exp(1j * k) * np.eye(n) - R_rl, t.block([R], [R]) @ Q) if n else Q
    Q_dag = np.conj(Q).T

    lam_t = t.block([T], [T])
    lam_tl = t.block([T], [L])
    lam_tr = t.block([T], [R])
    lam_tb = t.block([T], [B])
    lam_br = t.block([B], [R])
    lam_bl = t.block([B], [L])

    A_k = lam_t + lam_tl @ W @ lam_tl.T + lam_tr @ Q @ lam_tl.T - lam_tl @ Q_dag @ lam_tr.T
    B_k = (
        lam_tb
        - lam_tl @ Q_dag @ lam_br.T
        + lam_tr @ Q @ lam_bl.T
        + lam_tl @ W @ lam_bl.T
    )
    return A_k, B_k, condition


def lightlike_channel(
    t: IsoTensor,
    k: float,
    condition_max: float = CONDITION_MAX,
    detour: float = DETOUR,
) -> LightlikeSample:
    """
    (A_k, B_k) of the channel V_b → V_t after contracting the l/r legs.

    Q_k = (e^{-ik} - Λ_{V_rV_l}ᵀ)^{-1} and W_k = (e^{ik} - Λ_{V_rV_l})^{-1} Λ_{V_r} Q_k.
    When the resolvent is near singular the value is averaged over k ± detour
    and flagged as a removable-singularity candidate.
    """
    _require_lightlike(t)
    A_k, B_k, condition = _closed_form(t, k)
    if condition < condition_max:
        return LightlikeSample(k=k, A_k=A_k, B_k=B_k)

    logger.warning("Near-singular resolvent, evaluating around it", k=k, condition=condition)
    A_lo, B_lo, _ = _closed_form(t, k - detour)
    A_hi, B_hi, _ = _closed_form(t, k + detour)
    return LightlikeSample(k=k, A_k=0.5 * (A_lo + A_hi), B_k=0.5 * (B_lo + B_hi), flagged=True)


def lightlike_momentum_channel(
    t: IsoTensor,
    L: int,
    condition_max: float = CONDITION_MAX,
    detour: float = DETOUR,
    n_jobs: Optional[int] = 1,
) -> Tuple[MomentumChannel, List[int]]:
    """Sample the light-like channel on k = 2πm/L; also returns flagged grid indices."""
    require_valid(t)
    _require_lightlike(t)
    k_grid = momentum_grid(L)
    samples = Parallel(n_jobs=n_jobs)(
        delayed(lightlike_channel)(t, float(k), condition_max, detour) for k in k_grid
    )
    A_k = np.stack([s.A_k for s in samples])
    B_k = np.stack([s.B_k for s in samples])
    flagged = [i for i, s in enumerate(samples) if s.flagged]
    A_k = 0.5 * (A_k - np.conj(np.swapaxes(A_k, 1, 2)))
    return MomentumChannel(k_grid=k_grid, A_k=A_k, B_k=B_k), flagged


def ring_contraction(t: IsoTensor, N: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Brute-force light-like channel of an N-site ring.

    Every tensor's V_r leg is contracted with the next tensor's V_l leg by
    projecting onto the bond state Γ^ref[r_{x-1}, l_x] = +I, and the kept
    (V_t, V_b) correlations follow from one Schur complement:
    Γ_out = Γ_KK + Γ_KC (Γ_CC - Γ^ref)^{-1} Γ_KCᵀ.

    Returns:
        (A_k, B_k) on the grid k = 2πm/N.
    """
    _require_lightlike(t)
    n = t.modes(R)
    mt, mb = t.modes(T), t.modes(B)
    kept_cell = mt + mb
    bond_cell = 2 * n

    local_kk = t.block([T, B], [T, B])
    local_kc = t.block([T, B], [R, L])
    local_cc = t.block([R, L], [R, L])

    eye = np.eye(N)
    gamma_kk = np.kron(eye, local_kk)
    gamma_kc = np.kron(eye, local_kc)
    gamma_cc = np.kron(eye, local_cc)

    reference = np.zeros((N * bond_cell, N * bond_cell))
    for x in range(N):
        r_prev = ((x - 1) % N) * bond_cell + np.arange(n)
        l_here = x * bond_cell + n + np.arange(n)
        reference[np.ix_(r_prev, l_here)] += np.eye(n)
        reference[np.ix_(l_here, r_prev)] -= np.eye(n)

    gamma_out = gamma_kk + gamma_kc @ np.linalg.solve(gamma_cc - reference, gamma_kc.T)
    blocks = np.fft.fft(circulant_blocks(gamma_out, kept_cell, tol=1e-8), axis=0)
    return blocks[:, :mt, :mt], blocks[:, :mt, mt:]
