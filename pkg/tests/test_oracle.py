"""Dense oracles: Jordan-Wigner Majoranas and sequential qudit circuits."""

import numpy as np
import pytest

from src.core.correlation import CorrelationMatrix
from src.core.errors import InvariantViolation
from src.core.random import haar_unitary, random_antisymmetric, random_correlation
from src.oracle.circuit import (
    Gate,
    TinyCircuit,
    cat_state,
    identity_circuit,
    isospectral_check,
    product_state,
    random_circuit,
    simulate_sequential,
)
from src.oracle.fock import (
    gaussian_consistency,
    gaussian_density_matrix,
    gaussian_unitary,
    majorana_operators,
    majorana_rotation,
    parity_operator,
    state_correlation,
)


def test_majoranas_anticommute():
    ops = majorana_operators(3)
    assert len(ops) == 6
    for a, first in enumerate(ops):
        for b, second in enumerate(ops):
            expected = 2.0 * np.eye(8) if a == b else np.zeros((8, 8))
            assert np.allclose(first @ second + second @ first, expected)


def test_majorana_operators_are_capped():
    with pytest.raises(ValueError):
        majorana_operators(11)


def test_empty_state_correlation():
    empty = np.zeros(4, dtype=complex)
    empty[0] = 1.0
    gamma = state_correlation(empty)
    assert np.allclose(gamma.data, CorrelationMatrix.vacuum(4, sign=-1.0).data)


def test_parity_anticommutes_with_majoranas():
    parity = parity_operator(3)
    assert np.allclose(np.diag(parity_operator(2)), [1.0, -1.0, -1.0, 1.0])
    for op in majorana_operators(3):
        assert np.allclose(parity @ op, -op @ parity)


def test_gaussian_unitaries_conserve_parity(rng):
    U = gaussian_unitary(random_antisymmetric(rng, 6))
    parity = parity_operator(3)
    assert np.allclose(U @ parity, parity @ U, atol=1e-10)


def test_density_matrix_reproduces_correlations(rng):
    gamma = random_correlation(rng, 6)
    rho = gaussian_density_matrix(gamma)
    assert np.isclose(np.trace(rho).real, 1.0)
    assert np.allclose(state_correlation(rho).data, gamma.data, atol=1e-10)


def test_gaussian_unitary_rotates_majoranas(rng):
    R = majorana_rotation(gaussian_unitary(random_antisymmetric(rng, 4)))
    assert np.allclose(R @ R.T, np.eye(4), atol=1e-10)
    assert np.isclose(np.linalg.det(R), 1.0)


@pytest.mark.parametrize("system,env", [(1, 1), (2, 1), (1, 2)])
def test_gaussian_channel_matches_dense_evolution(rng, system, env):
    assert gaussian_consistency(rng, system, env) <= 1e-8


def test_random_circuits_are_isospectral(rng):
    for _ in range(10):
        circuit = random_circuit(rng, L=4, d=2, T=2)
        state = product_state(rng, 4, 2)
        for t0 in range(circuit.T + 1):
            report = isospectral_check(circuit, state, t0)
            assert report.mismatch <= 1e-10
            assert report.complement_mismatch <= 1e-10


def test_qutrit_circuit_is_isospectral(rng):
    circuit = random_circuit(rng, L=3, d=3, T=2)
    report = isospectral_check(circuit, cat_state(3, 3), 1)
    assert report.mismatch <= 1e-10


def test_two_environment_qudits_per_gate(rng):
    circuit = random_circuit(rng, L=3, d=2, T=2, env_per_gate=2)
    assert circuit.n_env == 4
    state = product_state(rng, 3, 2)
    for t0 in range(circuit.T + 1):
        assert isospectral_check(circuit, state, t0).mismatch <= 1e-10


def test_sequential_run_records_every_step(rng):
    circuit = random_circuit(rng, L=4, d=2, T=3)
    run = simulate_sequential(circuit, product_state(rng, 4, 2))
    assert len(run.rho_v) == 4
    for rho in run.rho_v:
        assert np.isclose(np.trace(rho).real, 1.0)
    assert np.isclose(np.linalg.norm(run.final_state), 1.0)


def test_identity_circuit_keeps_input():
    state = cat_state(4, 2)
    run = simulate_sequential(identity_circuit(4, 2, 2), state)
    assert np.allclose(run.rho_v[-1], np.outer(state, np.conj(state)))


def test_non_commuting_gates_are_rejected(rng):
    gates = [
        Gate(site=0, step=0, unitary=haar_unitary(rng, 8)),
        Gate(site=1, step=0, unitary=haar_unitary(rng, 8)),
    ]
    with pytest.raises(InvariantViolation) as info:
        TinyCircuit(L=3, d=2, T=1, gates=gates)
    assert info.value.invariant == "commutation"


def test_non_unitary_gate_is_rejected():
    with pytest.raises(InvariantViolation) as info:
        TinyCircuit(L=2, d=2, T=1, gates=[Gate(site=0, step=0, unitary=2.0 * np.eye(8))])
    assert info.value.invariant == "unitarity"


def test_dense_dimension_is_capped(rng):
    with pytest.raises(ValueError):
        random_circuit(rng, L=6, d=3, T=4)


def test_isospectral_check_rejects_bad_step(rng):
    circuit = random_circuit(rng, L=3, d=2, T=1)
    with pytest.raises(ValueError):
        isospectral_check(circuit, product_state(rng, 3, 2), 2)
