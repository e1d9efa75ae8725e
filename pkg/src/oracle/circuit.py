"""Tiny dense simulator of sequential qudit circuits with fresh environments."""

from typing import Callable, List, Optional

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.errors import InvariantViolation
from src.core.random import haar_unitary

logger = structlog.get_logger()

MAX_SITES = 6
MAX_DIM = 3
MAX_STEPS = 4
MAX_HILBERT = 3 ** 10
UNITARITY_TOL = 1e-12
COMMUTATION_TOL = 1e-10


class Gate(BaseModel):
    """Unitary on sites (x, x+1) and its own fresh environment qudits."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    site: int = Field(..., ge=0, description="Left site x of the bond (x, x+1)")
    step: int = Field(..., ge=0)
    unitary: np.ndarray = Field(..., description="Ordered as (x, x+1, env_1, ..., env_e)")


class TinyCircuit(BaseModel):
    """
    Sequential circuit on L virtual qudits.

    Responsibilities:
    - Enforce the brute-force caps (L ≤ 6, d ≤ 3, T ≤ 4, dimension ≤ 3^10)
    - Check gate unitarity and commutation of gates sharing a step
    - Assign every gate its environment qudits, all starting in |0⟩
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    L: int = Field(..., ge=2, le=MAX_SITES)
    d: int = Field(..., ge=2, le=MAX_DIM)
    T: int = Field(..., ge=1, le=MAX_STEPS)
    env_per_gate: int = Field(default=1, ge=1)
    gates: List[Gate]

    @model_validator(mode="after")
    def _check(self) -> "TinyCircuit":
        gate_dim = self.d ** (2 + self.env_per_gate)
        if self.d ** self.n_qudits > MAX_HILBERT:
            raise ValueError(f"dense dimension {self.d}^{self.n_qudits} exceeds 3^10")
        for gate in self.gates:
            if gate.site + 1 >= self.L or gate.step >= self.T:
                raise ValueError(f"gate at site {gate.site}, step {gate.step} lies outside the circuit")
            if gate.unitary.shape != (gate_dim, gate_dim):
                raise ValueError(f"gate must be {gate_dim}x{gate_dim}, got {gate.unitary.shape}")
            defect = float(np.max(np.abs(np.conj(gate.unitary).T @ gate.unitary - np.eye(gate_dim))))
            if defect > UNITARITY_TOL:
                raise InvariantViolation("unitarity", defect, f"gate at site {gate.site}, step {gate.step}")
        self._check_commutation()
        return self

    def _check_commutation(self) -> None:
        for step in range(self.T):
            layer = [(i, g) for i, g in enumerate(self.gates) if g.step == step]
            for a, (i, first) in enumerate(layer):
                for j, second in layer[a + 1:]:
                    if abs(first.site - second.site) > 1:
                        continue
                    vector = np.random.default_rng(0).standard_normal(self.dimension) + 0j
                    vector /= np.linalg.norm(vector)
                    one = self.apply_gate(self.apply_gate(vector, j), i)
                    two = self.apply_gate(self.apply_gate(vector, i), j)
                    defect = float(np.max(np.abs(one - two)))
                    if defect > COMMUTATION_TOL:
                        raise InvariantViolation(
                            "commutation", defect, f"gates at sites {first.site} and {second.site} in step {step}"
                        )

    @property
    def n_env(self) -> int:
        return len(self.gates) * self.env_per_gate

    @property
    def n_qudits(self) -> int:
        return self.L + self.n_env

    @property
    def dimension(self) -> int:
        return self.d ** self.n_qudits

    def env_qudits(self, gate_index: int) -> List[int]:
        start = self.L + gate_index * self.env_per_gate
        return list(range(start, start + self.env_per_gate))

    def gate_qudits(self, gate_index: int) -> List[int]:
        gate = self.gates[gate_index]
        return [gate.site, gate.site + 1] + self.env_qudits(gate_index)

    def apply_gate(self, state: np.ndarray, gate_index: int) -> np.ndarray:
        axes = self.gate_qudits(gate_index)
        psi = np.moveaxis(state.reshape((self.d,) * self.n_qudits), axes, range(len(axes)))
        shape = psi.shape
        psi = self.gates[gate_index].unitary @ psi.reshape(self.d ** len(axes), -1)
        psi = np.moveaxis(psi.reshape(shape), range(len(axes)), axes)
        return psi.reshape(-1)


class SequentialRun(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    final_state: np.ndarray = Field(..., description="Pure state on virtual + environment qudits")
    rho_v: List[np.ndarray] = Field(..., description="ρ_V(t) for t = 0..T")


class IsospectralReport(BaseModel):
    t0: int
    mismatch: float = Field(..., description="max |spec ρ_A - spec ρ_V(t0)|")
    complement_mismatch: float = Field(..., description="max |spec ρ_B - spec ρ_A|")


def _reduced_spectrum(state: np.ndarray, circuit: TinyCircuit, keep: List[int]) -> np.ndarray:
    psi = state.reshape((circuit.d,) * circuit.n_qudits)
    psi = np.moveaxis(psi, keep, range(len(keep))).reshape(circuit.d ** len(keep), -1)
    return np.linalg.svd(psi, compute_uv=False) ** 2


def _pad_compare(first: np.ndarray, second: np.ndarray) -> float:
    size = max(first.size, second.size)
    a = np.sort(np.pad(first, (0, size - first.size)))[::-1]
    b = np.sort(np.pad(second, (0, size - second.size)))[::-1]
    return float(np.max(np.abs(a - b)))


def _embed(circuit: TinyCircuit, input_state: np.ndarray) -> np.ndarray:
    virtual = np.asarray(input_state, dtype=complex).reshape(-1)
    if virtual.size != circuit.d ** circuit.L:
        raise ValueError(f"input must have {circuit.d ** circuit.L} amplitudes, got {virtual.size}")
    env = np.zeros(circuit.d ** circuit.n_env, dtype=complex)
    env[0] = 1.0
    return np.kron(virtual / np.linalg.norm(virtual), env)


def simulate_sequential(circuit: TinyCircuit, input_state: np.ndarray) -> SequentialRun:
    """Run the circuit step by step, recording ρ_V(t) after each step."""
    state = _embed(circuit, input_state)
    virtual_dim = circuit.d ** circuit.L

    def rho_v(psi: np.ndarray) -> np.ndarray:
        matrix = psi.reshape(virtual_dim, -1)
        return matrix @ np.conj(matrix).T

    history = [rho_v(state)]
    for step in range(circuit.T):
        for index, gate in enumerate(circuit.gates):
            if gate.step == step:
                state = circuit.apply_gate(state, index)
        history.append(rho_v(state))
    return SequentialRun(final_state=state, rho_v=history)


def isospectral_check(circuit: TinyCircuit, input_state: np.ndarray, t0: int) -> IsospectralReport:
    """Compare spec ρ_A (environments of steps < t0, after the full run) with spec ρ_V(t0)."""
    if not 0 <= t0 <= circuit.T:
        raise ValueError(f"t0 must lie in [0, {circuit.T}], got {t0}")
    run = simulate_sequential(circuit, input_state)

    region_a = [q for i, g in enumerate(circuit.gates) if g.step < t0 for q in circuit.env_qudits(i)]
    region_b = [q for q in range(circuit.n_qudits) if q not in region_a]
    spec_a = _reduced_spectrum(run.final_state, circuit, region_a) if region_a else np.array([1.0])
    spec_b = _reduced_spectrum(run.final_state, circuit, region_b)
    spec_v = np.linalg.eigvalsh(0.5 * (run.rho_v[t0] + np.conj(run.rho_v[t0]).T))

    report = IsospectralReport(
        t0=t0,
        mismatch=_pad_compare(spec_a, np.clip(spec_v, 0.0, None)),
        complement_mismatch=_pad_compare(spec_b, spec_a),
    )
    logger.debug("Isospectral check", t0=t0, mismatch=report.mismatch)
    return report


def random_circuit(
    rng: np.random.Generator,
    L: int,
    d: int,
    T: int,
    env_per_gate: int = 1,
    gate_sampler: Optional[Callable[[], np.ndarray]] = None,
) -> TinyCircuit:
    """Brickwork circuit: step t acts on bonds (x, x+1) with x ≡ t (mod 2)."""
    dim = d ** (2 + env_per_gate)
    sampler = gate_sampler or (lambda: haar_unitary(rng, dim))
    gates = [
        Gate(site=x, step=t, unitary=sampler())
        for t in range(T)
        for x in range(t % 2, L - 1, 2)
    ]
    return TinyCircuit(L=L, d=d, T=T, env_per_gate=env_per_gate, gates=gates)


def product_state(rng: np.random.Generator, L: int, d: int) -> np.ndarray:
    """Random product state of L qudits."""
    state = np.ones(1, dtype=complex)
    for _ in range(L):
        local = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        state = np.kron(state, local / np.linalg.norm(local))
    return state


def cat_state(L: int, d: int) -> np.ndarray:
    """(|0…0⟩ + |d-1…d-1⟩)/√2."""
    state = np.zeros(d ** L, dtype=complex)
    state[0] = 1.0
    state[-1] += 1.0
    return state / np.linalg.norm(state)


def identity_circuit(L: int, d: int, T: int) -> TinyCircuit:
    return random_circuit(np.random.default_rng(0), L, d, T, gate_sampler=lambda: np.eye(d ** 3))
