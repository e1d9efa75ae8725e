"""Momentum-space channels, band classification, bulk spectra and decay."""

import numpy as np
import pytest

from src.channels.channel import GaussianChannel, random_channel
from src.channels.decomposition import decompose_modes
from src.channels.steady import dissipative_fixed_point
from src.core.correlation import MomentumCorrelation, mirror_indices, momentum_grid
from src.core.errors import InvariantViolation
from src.core.fourier import fourier_blocks
from src.momentum.bands import classify_bands
from src.momentum.channel import (
    MomentumChannel,
    brickwall_realspace,
    build_brickwall,
    compose_momentum,
)
from src.momentum.decay import realspace_decay
from src.momentum.spectrum import bulk_spectrum
from src.momentum.steady import steady_state_k

J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def test_brickwall_matches_realspace_circuit(rng):
    two_site = random_channel(rng, 4)
    mc = build_brickwall(two_site, 6)
    reference = MomentumChannel.from_realspace(brickwall_realspace(two_site, 6), cell_modes=4)
    assert np.allclose(mc.A_k, reference.A_k, atol=1e-12)
    assert np.allclose(mc.B_k, reference.B_k, atol=1e-12)


def test_brickwall_rejects_odd_grid(rng):
    with pytest.raises(ValueError):
        build_brickwall(random_channel(rng, 4), 5)


def test_momentum_channel_rejects_expanding_block():
    k = momentum_grid(2)
    A = np.zeros((2, 2, 2))
    B = np.stack([np.eye(2), 1.5 * np.eye(2)])
    with pytest.raises(InvariantViolation) as info:
        MomentumChannel(k_grid=k, A_k=A, B_k=B)
    assert info.value.invariant == "cptp"


def test_compose_momentum_of_constant_channels(rng):
    first = random_channel(rng, 2)
    second = random_channel(rng, 2)
    composed = compose_momentum(MomentumChannel.constant(first, 4), MomentumChannel.constant(second, 4))
    assert np.allclose(composed.B_k, second.B @ first.B)
    assert np.allclose(composed.A_k, second.A + second.B @ first.A @ second.B.T)


def test_identity_brickwall_preserves_everything():
    bands = classify_bands(build_brickwall(GaussianChannel.identity(4), 8))
    assert bands.generic_dimension == 4
    assert bands.exceptions == []
    assert np.all(bands.preserved_dimensions == 4)
    assert np.all(bands.r_k == 0.0)
    assert bands.r == 0.0


def test_random_brickwall_is_fully_dissipative(rng):
    bands = classify_bands(build_brickwall(random_channel(rng, 4), 16))
    assert bands.generic_dimension == 0
    assert bands.exceptions == []
    assert 0.0 < bands.r < 1.0


def test_isolated_unit_momentum_is_an_exception():
    k = momentum_grid(16)
    b = 1.0 - 0.5 * (1.0 - np.cos(k))
    mc = MomentumChannel(k_grid=k, A_k=np.zeros((16, 2, 2)), B_k=b[:, None, None] * np.eye(2))
    bands = classify_bands(mc)
    assert bands.generic_dimension == 0
    assert bands.exceptions == [0]
    assert bands.preserved_dimensions[0] == 2
    assert bands.r == pytest.approx(b[1])

    steady = steady_state_k(mc, bands=bands)
    assert np.flatnonzero(steady.skipped).tolist() == [0]
    assert np.allclose(steady.blocks, 0.0)


def _reflection(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s], [s, c]])
    return R @ np.diag([1.0, -1.0]) @ R.T


def test_rotated_preserved_basis_is_ambiguous():
    k = momentum_grid(16)
    # eigenbasis turned by π/4 at k = π/2 and 3π/2 only
    B = np.stack([_reflection(np.pi / 4 if i in (4, 12) else 0.0) for i in range(16)])
    bands = classify_bands(MomentumChannel(k_grid=k, A_k=np.zeros((16, 2, 2)), B_k=B))
    assert bands.generic_dimension == 2
    assert bands.exceptions == []
    assert len(bands.ambiguities) == 4
    first = bands.ambiguities[0]
    assert (first.k_start, first.k_end) == (pytest.approx(k[3]), pytest.approx(k[4]))
    assert first.reason == "competing candidates"
    assert first.max_overlap == pytest.approx(np.sqrt(0.5))


def test_steady_state_matches_realspace(rng):
    two_site = random_channel(rng, 4)
    L = 6
    steady = steady_state_k(build_brickwall(two_site, L))
    assert not steady.skipped.any()

    dec = decompose_modes(brickwall_realspace(two_site, L))
    assert dec.preserved_count == 0
    X = dissipative_fixed_point(dec)
    reference = fourier_blocks(dec.Q_d @ X @ dec.Q_d.T, cell_modes=4)
    assert np.allclose(steady.blocks, reference.blocks, atol=1e-10)


def test_steady_state_k_fixed_point(rng):
    mc = build_brickwall(random_channel(rng, 4), 16)
    steady = steady_state_k(mc)
    for i in range(mc.length):
        A, B = mc.at(i)
        G = steady.blocks[i]
        assert np.allclose(A + B @ G @ np.conj(B).T, G, atol=1e-10)


def _flat_band(lam: np.ndarray) -> MomentumCorrelation:
    k = momentum_grid(lam.shape[0])
    return MomentumCorrelation(k_grid=k, blocks=lam[:, None, None] * J[None])


def test_smooth_spectrum_is_certified():
    k = momentum_grid(32)
    spectrum, report = bulk_spectrum(_flat_band(0.5 + 0.3 * np.cos(k)))
    assert spectrum.branch_count == 2
    assert report.certified
    assert np.allclose(np.sort(np.abs(spectrum.lambdas), axis=1), (0.5 + 0.3 * np.cos(k))[:, None])
    assert np.allclose(spectrum.energies[:, 0], -spectrum.energies[:, 1])


def test_sign_flip_is_flagged():
    k = momentum_grid(16)
    lam = np.where(np.cos(k) > 1e-9, 0.5, -0.5)
    _, report = bulk_spectrum(_flat_band(lam))
    assert not report.certified
    flagged = [b for b in report.branches if b.sign_crossing]
    assert flagged
    assert all(len(b.discontinuities) == 2 for b in flagged)


def test_random_brickwall_spectrum_is_certified(rng):
    for _ in range(20):
        steady = steady_state_k(build_brickwall(random_channel(rng, 4), 64))
        spectrum, report = bulk_spectrum(steady)
        assert report.certified
        assert spectrum.branch_count == 4
        assert not spectrum.exceptional.any()


def test_brickwall_spectrum_is_antisymmetric(rng):
    steady = steady_state_k(build_brickwall(random_channel(rng, 4), 64))
    spectrum, _ = bulk_spectrum(steady)
    mirror = mirror_indices(spectrum.k_grid)
    assert np.all(mirror >= 0)
    energies = np.sort(spectrum.energies, axis=1)
    assert np.allclose(energies[mirror], -energies[:, ::-1], atol=1e-8)


def test_brickwall_spectrum_is_grid_independent(rng):
    two_site = random_channel(rng, 4)
    coarse, _ = bulk_spectrum(steady_state_k(build_brickwall(two_site, 32)))
    fine, _ = bulk_spectrum(steady_state_k(build_brickwall(two_site, 64)))
    assert np.allclose(fine.k_grid[::2], coarse.k_grid)
    assert np.allclose(
        np.sort(fine.lambdas[::2], axis=1), np.sort(coarse.lambdas, axis=1), atol=1e-9
    )


def test_random_brickwall_decay_respects_bound(rng):
    for _ in range(10):
        mc = build_brickwall(random_channel(rng, 4), 128)
        bands = classify_bands(mc)
        report = realspace_decay(steady_state_k(mc, bands=bands), r=bands.r)
        assert report.passed
        assert report.xi <= report.bound


def test_decay_of_synthetic_profile():
    L = 64
    d = np.arange(L)
    g = 0.5 ** np.minimum(d, L - d)
    blocks = np.fft.fft(g)
    report = realspace_decay(blocks, r=0.5)
    assert report.xi == pytest.approx(1.0 / np.log(2.0), rel=1e-6)
    assert report.passed
    assert report.max_abs_correlation[3] == pytest.approx(0.125)

    strict = realspace_decay(blocks, r=0.3)
    assert not strict.passed


def test_decay_of_ultralocal_state():
    blocks = np.ones(32, dtype=complex)
    report = realspace_decay(blocks)
    assert report.xi == 0.0
    assert report.fit_points == 0
    assert report.passed
    first = report.to_rows()[0]
    assert first["distance"] == 0
    assert first["max_abs_correlation"] == pytest.approx(1.0)
