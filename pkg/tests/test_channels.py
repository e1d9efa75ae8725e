"""Real-space Gaussian channels: CPTP checks, mode split, steady states."""

import numpy as np
import pytest

from src.channels.channel import (
    GaussianChannel,
    apply,
    compose,
    random_channel,
    validate_channel,
)
from src.channels.decomposition import decompose_modes
from src.channels.steady import (
    convergence_rate,
    dissipative_fixed_point,
    steady_state,
    steady_state_at,
)
from src.core.correlation import CorrelationMatrix
from src.core.errors import DecompositionError, InvariantViolation
from src.core.random import random_correlation
from src.models.kitaev import kitaev_channel

J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def rotating_channel(theta: float = 0.7) -> GaussianChannel:
    """Rotation on Majoranas (0, 1), damping 0.5 with source 0.3 J on (2, 3)."""
    c, s = np.cos(theta), np.sin(theta)
    B = np.zeros((4, 4))
    B[:2, :2] = [[c, -s], [s, c]]
    B[2:, 2:] = 0.5 * np.eye(2)
    A = np.zeros((4, 4))
    A[2:, 2:] = 0.3 * J
    return GaussianChannel(A=A, B=B)


def test_identity_channel_is_isometric():
    report = validate_channel(np.zeros((2, 2)), np.eye(2))
    assert report.isometric
    assert report.passed
    assert report.antisymmetry_defect == 0.0


def test_channel_rejects_symmetric_source():
    with pytest.raises(InvariantViolation) as info:
        GaussianChannel(A=np.ones((2, 2)), B=np.zeros((2, 2)))
    assert info.value.invariant == "antisymmetry"


def test_channel_rejects_expanding_transfer():
    with pytest.raises(InvariantViolation) as info:
        GaussianChannel(A=np.zeros((2, 2)), B=2.0 * np.eye(2))
    assert info.value.invariant == "cptp"


def test_apply_preserves_physical_states(rng):
    for _ in range(50):
        channel = random_channel(rng, 6)
        gamma = random_correlation(rng, 6)
        out = apply(channel, gamma, t=3)
        assert np.linalg.norm(out.data, 2) <= 1.0 + 1e-10


def test_apply_rejects_wrong_size():
    with pytest.raises(ValueError):
        apply(GaussianChannel.identity(4), CorrelationMatrix.vacuum(2))


def test_compose_matches_sequential_application(rng):
    first = random_channel(rng, 4)
    second = random_channel(rng, 4)
    gamma = random_correlation(rng, 4)
    composed = apply(compose(first, second), gamma)
    sequential = apply(second, apply(first, gamma))
    assert np.allclose(composed.data, sequential.data, atol=1e-12)


def test_reset_channel_prepares_target():
    target = CorrelationMatrix.vacuum(4, sign=-1.0)
    channel = GaussianChannel.reset(target)
    out = apply(channel, CorrelationMatrix.zeros(4))
    assert np.allclose(out.data, target.data)


def test_random_channel_has_no_preserved_modes(rng):
    channel = random_channel(rng, 6, s_max=0.8)
    dec = decompose_modes(channel)
    assert dec.preserved_count == 0
    assert dec.dissipative_count == 6
    assert dec.r <= 0.8 + 1e-12


def test_rotating_channel_split():
    channel = rotating_channel()
    dec = decompose_modes(channel)
    assert dec.preserved_count == 2
    assert not dec.odd_preserved
    assert np.isclose(dec.r, 0.5)
    assert dec.lemma_residual < 1e-12
    assert np.allclose(dec.U @ dec.U.T, np.eye(2), atol=1e-10)
    assert np.allclose(dec.P_u + dec.P_d, np.eye(4), atol=1e-10)
    assert dec.isometry_residual < 1e-12


def test_contracting_modes_are_not_preserved_under_loose_tolerance():
    channel = GaussianChannel(A=np.zeros((2, 2)), B=0.95 * np.eye(2))
    with pytest.raises(DecompositionError) as info:
        decompose_modes(channel, tol_unit=0.1)
    assert info.value.invariant == "isometry"
    assert info.value.magnitude == pytest.approx(1.0 - 0.95**2)


def test_kitaev_channel_has_odd_preserved_count():
    dec = decompose_modes(kitaev_channel())
    assert dec.preserved_count == 1
    assert dec.odd_preserved
    assert dec.r == 0.0


def test_dissipative_fixed_point_solves_block():
    dec = decompose_modes(rotating_channel())
    X = dissipative_fixed_point(dec)
    assert np.allclose(X, dec.A_d + dec.B_d @ X @ dec.B_d.T, atol=1e-12)
    assert np.allclose(X, dec.A_d / 0.75, atol=1e-12)


def test_steady_state_is_a_fixed_point():
    channel = rotating_channel()
    dec = decompose_modes(channel)
    gamma0 = CorrelationMatrix.vacuum(4)
    steady = steady_state(channel, dec, gamma0)
    assert np.allclose(apply(channel, steady).data, steady.data, atol=1e-12)
    assert np.allclose(steady.data[:2, :2], J, atol=1e-12)
    later = steady_state_at(channel, dec, gamma0, 5)
    assert np.allclose(later.data, steady.data, atol=1e-12)


def test_steady_state_of_random_channel(rng):
    channel = random_channel(rng, 6)
    dec = decompose_modes(channel)
    steady = steady_state(channel, dec, random_correlation(rng, 6))
    assert np.allclose(apply(channel, steady).data, steady.data, atol=1e-10)


def test_convergence_rate_of_rotating_channel():
    report = convergence_rate(rotating_channel(), CorrelationMatrix.vacuum(4), 40)
    assert report.passed
    assert np.isclose(report.spectral_radius, 0.5)
    assert report.slope == pytest.approx(np.log(0.25), abs=1e-2)


def test_convergence_of_kitaev_channel_is_instant():
    report = convergence_rate(kitaev_channel(), CorrelationMatrix.vacuum(2), 10)
    assert report.passed
    assert report.bound is None


def test_convergence_rate_beats_spectral_radius(rng):
    for _ in range(50):
        channel = random_channel(rng, 6)
        report = convergence_rate(channel, random_correlation(rng, 6), 60)
        assert report.slope < 0
        assert report.passed
