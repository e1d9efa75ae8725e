"""Dense Fock-space helpers for brute-force checks of Gaussian formulas."""

from functools import lru_cache
from typing import List, Tuple

import numpy as np
import structlog
from scipy.linalg import expm

from src.channels.channel import GaussianChannel, apply
from src.core.correlation import CorrelationMatrix
from src.core.random import random_antisymmetric, random_correlation
from src.core.spectrum import canonical_form, entanglement_spectrum, many_body_spectrum

logger = structlog.get_logger()

MAX_FERMIONS = 10

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Y = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I = np.eye(2, dtype=complex)


def _kron_all(factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for factor in factors:
        out = np.kron(out, factor)
    return out


@lru_cache(maxsize=None)
def _cached_operators(n_fermions: int) -> Tuple[np.ndarray, ...]:
    ops = []
    for j in range(n_fermions):
        string = [_Z] * j
        tail = [_I] * (n_fermions - j - 1)
        ops.append(_kron_all(string + [_X] + tail))
        ops.append(_kron_all(string + [_Y] + tail))
    for op in ops:
        op.setflags(write=False)
    return tuple(ops)


def majorana_operators(n_fermions: int) -> List[np.ndarray]:
    """
    Jordan-Wigner Majoranas c_{2j} = Z…Z X, c_{2j+1} = Z…Z Y.

    |0⟩ is the empty state, so a_j = (c_{2j} + i c_{2j+1})/2 annihilates.
    """
    if n_fermions > MAX_FERMIONS:
        raise ValueError(f"dense construction capped at {MAX_FERMIONS} fermions, got {n_fermions}")
    return list(_cached_operators(n_fermions))


def parity_operator(n_fermions: int) -> np.ndarray:
    """(-1)^N, diagonal in the occupation basis."""
    popcount = np.array([bin(s).count("1") for s in range(2 ** n_fermions)])
    return np.diag((-1.0) ** popcount)


def even_sector(n_fermions: int) -> np.ndarray:
    popcount = np.array([bin(s).count("1") for s in range(2 ** n_fermions)])
    return popcount % 2 == 0


def gaussian_density_matrix(gamma: CorrelationMatrix) -> np.ndarray:
    """ρ = Π_j (I + λ_j i c̃_{2j} c̃_{2j+1}) / 2^n with c̃ = Oᵀc from the canonical form."""
    n = gamma.n_modes // 2
    ops = majorana_operators(n)
    frame, lambdas = canonical_form(gamma)
    rotated = [sum(frame[b, a] * ops[b] for b in range(2 * n)) for a in range(2 * n)]
    rho = np.eye(2 ** n, dtype=complex)
    for j, value in enumerate(lambdas):
        rho = rho @ (np.eye(2 ** n) + value * 1j * rotated[2 * j] @ rotated[2 * j + 1]) / 2.0
    return rho


def state_correlation(rho: np.ndarray) -> CorrelationMatrix:
    """Γ_jl = i Tr(ρ c_j c_l) for j ≠ l; accepts a state vector or a density matrix."""
    rho = np.asarray(rho)
    if rho.ndim == 1:
        rho = np.outer(rho, np.conj(rho))
    n = int(round(np.log2(rho.shape[0])))
    ops = majorana_operators(n)
    size = 2 * n
    data = np.zeros((size, size))
    for j in range(size):
        for l in range(j + 1, size):
            value = float(np.real(1j * np.trace(rho @ ops[j] @ ops[l])))
            data[j, l] = value
            data[l, j] = -value
    return CorrelationMatrix(data=data)


def gaussian_unitary(h: np.ndarray) -> np.ndarray:
    """U = exp(¼ Σ h_ab c_a c_b) for real antisymmetric h."""
    size = h.shape[0]
    ops = majorana_operators(size // 2)
    generator = sum(h[a, b] * ops[a] @ ops[b] for a in range(size) for b in range(size))
    return expm(0.25 * generator)


def majorana_rotation(unitary: np.ndarray) -> np.ndarray:
    """R with U† c_a U = Σ_b R_ab c_b, read off as R_ab = Tr(U† c_a U c_b)/2^n."""
    dim = unitary.shape[0]
    n = int(round(np.log2(dim)))
    ops = majorana_operators(n)
    u_dag = np.conj(unitary).T
    size = 2 * n
    R = np.zeros((size, size))
    for a in range(size):
        evolved = u_dag @ ops[a] @ unitary
        for b in range(size):
            R[a, b] = float(np.real(np.trace(evolved @ ops[b]))) / dim
    return R


def partial_trace_last(rho: np.ndarray, keep_fermions: int) -> np.ndarray:
    """Trace out the trailing fermions; Jordan-Wigner strings make this a plain qubit trace."""
    total = int(round(np.log2(rho.shape[0])))
    drop = 2 ** (total - keep_fermions)
    keep = 2 ** keep_fermions
    return np.einsum("iaja->ij", rho.reshape(keep, drop, keep, drop))


def gaussian_gate_channel(h: np.ndarray, system_fermions: int) -> GaussianChannel:
    """
    Channel on the leading `system_fermions` from a Gaussian unitary with the
    remaining fermions starting empty: A = R_se Γ_env R_seᵀ, B = R_ss.
    """
    R = majorana_rotation(gaussian_unitary(h))
    s = 2 * system_fermions
    env = CorrelationMatrix.vacuum(R.shape[0] - s, sign=-1.0)
    R_ss = R[:s, :s]
    R_se = R[:s, s:]
    A = R_se @ env.data @ R_se.T
    return GaussianChannel(A=0.5 * (A - A.T), B=R_ss)


def gaussian_consistency(rng: np.random.Generator, system_fermions: int, env_fermions: int) -> float:
    """
    Max difference between dense and correlation-matrix evolution of a random
    Gaussian state through a random Gaussian gate, compared as full many-body spectra.
    """
    size = 2 * (system_fermions + env_fermions)
    h = random_antisymmetric(rng, size)
    gamma = random_correlation(rng, 2 * system_fermions)

    channel = gaussian_gate_channel(h, system_fermions)
    evolved = apply(channel, gamma)
    predicted = many_body_spectrum(entanglement_spectrum(evolved), 2 ** system_fermions)

    env_state = np.zeros((2 ** env_fermions, 2 ** env_fermions), dtype=complex)
    env_state[0, 0] = 1.0
    rho = np.kron(gaussian_density_matrix(gamma), env_state)
    U = gaussian_unitary(h)
    reduced = partial_trace_last(U @ rho @ np.conj(U).T, system_fermions)
    dense = np.sort(np.linalg.eigvalsh(0.5 * (reduced + np.conj(reduced).T)))[::-1]
    mismatch = float(np.max(np.abs(dense - predicted)))
    logger.debug("Gaussian consistency", mismatch=mismatch)
    return mismatch
