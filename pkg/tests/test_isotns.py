"""Isometric tensors: validation, column contraction, light-like channels."""

import numpy as np
import pytest

from src.channels.channel import GaussianChannel, random_channel
from src.core.correlation import CorrelationMatrix
from src.core.errors import InvariantViolation
from src.core.random import random_correlation
from src.isotns.lightlike import lightlike_channel, lightlike_momentum_channel, ring_contraction
from src.isotns.mps import (
    boundary_independence,
    bulk_physical_block,
    contract_column,
    physical_blocks,
)
from src.isotns.tensor import (
    IsoTensor,
    Leg,
    LegName,
    channel_from_tensor,
    dilate_channel,
    random_isometric_tensor,
    require_valid,
    validate_tensor,
)
from src.models.kitaev import kitaev_tensor

from tests.conftest import LIGHTLIKE_LAYOUT


def test_random_tensors_are_isometric(mps_tensor, lightlike_tensor):
    for tensor in (mps_tensor, lightlike_tensor):
        report = validate_tensor(tensor)
        assert report.passed
        assert report.purity_residual < 1e-10
        assert report.incoming_residual == 0.0
    assert mps_tensor.is_mps
    assert lightlike_tensor.is_lightlike
    assert set(validate_tensor(lightlike_tensor).isometric_residuals) == {"V_l", "V_b"}


def test_legs_must_follow_canonical_order():
    legs = [Leg(name=LegName.V_B, modes=2), Leg(name=LegName.P, modes=2)]
    with pytest.raises(ValueError):
        IsoTensor(legs=legs, Lambda=CorrelationMatrix.vacuum(4).data)


def test_leg_sizes_must_match_lambda():
    legs = [Leg(name=LegName.P, modes=2), Leg(name=LegName.V_T, modes=2), Leg(name=LegName.V_B, modes=4)]
    with pytest.raises(ValueError):
        IsoTensor(legs=legs, Lambda=CorrelationMatrix.vacuum(6).data)


def test_correlated_incoming_legs_are_rejected():
    legs = [Leg(name=LegName.P, modes=2), Leg(name=LegName.V_T, modes=2), Leg(name=LegName.V_B, modes=2)]
    tensor = IsoTensor(legs=legs, Lambda=CorrelationMatrix.vacuum(6).data)
    report = validate_tensor(tensor)
    assert report.purity_residual < 1e-12
    assert report.incoming_residual == 1.0
    assert not report.passed
    with pytest.raises(InvariantViolation) as info:
        require_valid(tensor)
    assert info.value.invariant == "isometric_form"


def test_kitaev_tensor_channel():
    tc = channel_from_tensor(kitaev_tensor())
    assert np.allclose(tc.virtual.B, np.diag([1.0, 0.0]))
    assert np.allclose(tc.virtual.A, 0.0)
    assert np.allclose(tc.A_P, 0.0)


def test_channel_from_tensor_rejects_lightlike(lightlike_tensor):
    with pytest.raises(ValueError):
        channel_from_tensor(lightlike_tensor)


def test_dilation_recovers_channel(rng):
    channel = random_channel(rng, 4)
    tensor = dilate_channel(channel)
    assert validate_tensor(tensor).passed
    tc = channel_from_tensor(tensor)
    assert np.allclose(tc.virtual.A, channel.A, atol=1e-12)
    assert np.allclose(tc.virtual.B, channel.B, atol=1e-12)


def test_column_contraction_is_pure_and_matches_blocks(mps_tensor):
    boundary = CorrelationMatrix.vacuum(2)
    column = contract_column(mps_tensor, boundary, depth=3)
    assert column.n_modes == 8
    assert column.is_pure
    blocks = physical_blocks(mps_tensor, boundary, 3)
    for y, block in enumerate(blocks):
        assert np.allclose(column.data[2 * y:2 * y + 2, 2 * y:2 * y + 2], block, atol=1e-12)


def test_bulk_block_is_the_deep_column_limit(rng):
    tensor = dilate_channel(random_channel(rng, 2, s_max=0.5))
    deep = physical_blocks(tensor, random_correlation(rng, 2), 60)[-1]
    assert np.allclose(bulk_physical_block(tensor), deep, atol=1e-10)


def test_boundary_independence(rng):
    tensor = dilate_channel(random_channel(rng, 2, s_max=0.7))
    report = boundary_independence(
        tensor, random_correlation(rng, 2), random_correlation(rng, 2), y_max=40
    )
    assert report.passed
    assert not report.plateau
    assert report.spectral_radius <= 0.7 + 1e-12
    assert report.differences[-1] < report.differences[0]


def test_kitaev_boundary_is_forgotten_after_one_row():
    # the boundaries differ only in the b1-b2 pairing, which the dissipative b2 drops
    report = boundary_independence(
        kitaev_tensor(), CorrelationMatrix.vacuum(2), CorrelationMatrix.zeros(2), y_max=10
    )
    assert report.passed
    assert not report.plateau
    assert report.bound is None
    assert max(report.differences[1:]) <= 1e-15


def test_preserved_modes_report_a_plateau(rng):
    theta = 0.7
    B = np.zeros((4, 4))
    B[:2, :2] = [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
    B[2:, 2:] = 0.5 * np.eye(2)
    A = np.zeros((4, 4))
    A[2:, 2:] = [[0.0, 0.3], [-0.3, 0.0]]
    tensor = dilate_channel(GaussianChannel(A=A, B=B))
    report = boundary_independence(tensor, CorrelationMatrix.vacuum(4), random_correlation(rng, 4), y_max=30)
    assert report.plateau
    assert report.passed
    assert report.bound is None
    assert report.spectral_radius == pytest.approx(0.5)


def test_lightlike_matches_ring_contraction(rng):
    N = 6
    for _ in range(5):
        tensor = random_isometric_tensor(rng, LIGHTLIKE_LAYOUT)
        ring_A, ring_B = ring_contraction(tensor, N)
        mc, flagged = lightlike_momentum_channel(tensor, N)
        assert flagged == []
        assert np.allclose(mc.A_k, ring_A, atol=1e-8)
        assert np.allclose(mc.B_k, ring_B, atol=1e-8)


def test_lightlike_reality(lightlike_tensor):
    plus = lightlike_channel(lightlike_tensor, 0.9)
    minus = lightlike_channel(lightlike_tensor, -0.9)
    assert np.allclose(np.conj(plus.A_k), minus.A_k, atol=1e-12)
    assert np.allclose(np.conj(plus.B_k), minus.B_k, atol=1e-12)
    assert not plus.flagged


def test_lightlike_rejects_mps_layout(mps_tensor):
    with pytest.raises(ValueError):
        lightlike_channel(mps_tensor, 0.0)
