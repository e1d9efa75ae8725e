"""Chern numbers, edge-mode counting and quasi-diagonality."""

import numpy as np
import pytest

from src.core.errors import GapClosedError
from src.core.random import haar_unitary
from src.models.lattice import LatticeModel
from src.models.pip import pip_model
from src.models.two_band import random_two_band_model
from src.topology.chern import chern_number
from src.topology.edge import edge_mode_count, trace_curve
from src.topology.projector import cylinder_projectors, model_projector
from src.topology.quasidiag import quasidiagonality


@pytest.fixture(scope="module")
def pip_projector():
    return model_projector(pip_model(), 24)


def test_pip_chern_number(pip_projector):
    assert abs(chern_number(pip_projector)) == 1


def test_chern_number_is_grid_independent(pip_projector):
    assert chern_number(model_projector(pip_model(), 12)) == chern_number(pip_projector)


def test_chern_number_is_unitarily_invariant(rng, pip_projector):
    rotated = pip_projector.conjugate(haar_unitary(rng, 2))
    assert chern_number(rotated) == chern_number(pip_projector)


def test_trivial_phase_has_no_chern_number():
    assert chern_number(model_projector(pip_model(mu=6.0), 24)) == 0


def test_gapless_model_is_rejected():
    # μ = 4 closes the gap at q = (0, 0)
    with pytest.raises(GapClosedError):
        model_projector(pip_model(mu=4.0), 24)


def test_chern_number_is_additive(pip_projector):
    nu = chern_number(pip_projector)
    trivial = model_projector(pip_model(mu=6.0), 24)
    assert chern_number(pip_projector.direct_sum(pip_projector)) == 2 * nu
    assert chern_number(pip_projector.direct_sum(trivial)) == nu


def test_direct_sum_needs_matching_grids(pip_projector):
    with pytest.raises(ValueError):
        pip_projector.direct_sum(model_projector(pip_model(), 12))


def test_chern_number_needs_torus_grid():
    with pytest.raises(ValueError):
        chern_number(cylinder_projectors(pip_model(), 8, 8))


def test_edge_count_matches_chern_number(pip_projector):
    edge = edge_mode_count(cylinder_projectors(pip_model(), 24, 48))
    assert edge.passed
    assert edge.cut_row == 12
    assert edge.nu_edge == chern_number(pip_projector)
    assert len(edge.jumps) >= 1


def test_edge_jump_on_a_sloped_background(pip_projector):
    # coarse q_x grid: the jump at the wrap sits on a steep bulk slope
    edge = edge_mode_count(cylinder_projectors(pip_model(), 16, 24))
    assert edge.passed
    assert edge.ambiguous == []
    assert edge.nu_edge == chern_number(pip_projector)
    assert [jump.index for jump in edge.jumps] == [23]


@pytest.mark.parametrize("cut_row", [8, 12, 16])
def test_edge_count_is_independent_of_the_cut_row(pip_projector, cut_row):
    edge = edge_mode_count(cylinder_projectors(pip_model(), 24, 48), cut_row=cut_row)
    assert edge.passed
    assert edge.cut_row == cut_row
    assert edge.nu_edge == chern_number(pip_projector)


def test_trivial_edge_count_is_zero():
    edge = edge_mode_count(cylinder_projectors(pip_model(mu=6.0), 24, 48))
    assert edge.passed
    assert edge.nu_edge == 0
    assert edge.jumps == []


def test_trace_curve_averages_to_half_filling():
    proj = cylinder_projectors(pip_model(mu=6.0), 12, 16)
    trace = trace_curve(proj)
    assert trace.shape == (16,)
    assert np.all((trace >= 0.0) & (trace <= 12.0))
    # P(-q) = 1 - P(q)* on the diagonal
    assert np.isclose(trace.mean(), 6.0)


def test_edge_count_rejects_cut_outside_cylinder():
    proj = cylinder_projectors(pip_model(), 8, 8)
    with pytest.raises(ValueError):
        edge_mode_count(proj, cut_row=8)


def test_random_two_band_models_agree(rng):
    for _ in range(10):
        model = random_two_band_model(rng, gap_min=0.5)
        nu = chern_number(model_projector(model, 24))
        edge = edge_mode_count(cylinder_projectors(model, 40, 48))
        assert edge.passed
        assert edge.nu_edge == nu


def test_model_round_trip_keeps_chern_number(pip_projector):
    model = LatticeModel.from_dict(pip_model().to_dict())
    assert chern_number(model_projector(model, 24)) == chern_number(pip_projector)


def _toeplitz(profile) -> np.ndarray:
    L = len(profile)
    d = np.abs(np.arange(L)[:, None] - np.arange(L)[None, :])
    return np.asarray(profile)[d]


def test_exponential_decay_is_quasidiagonal():
    report = quasidiagonality(_toeplitz(np.exp(-2.0 * np.arange(64))), alpha=10.0)
    assert report.passed
    assert not report.vacuous
    assert report.distances == list(range(2, 17))


def test_power_law_exponent():
    d = np.arange(64, dtype=float)
    profile = 1.0 / np.maximum(d, 1.0)
    assert not quasidiagonality(_toeplitz(profile), alpha=1.5).passed
    report = quasidiagonality(_toeplitz(profile), alpha=0.9)
    assert report.passed
    assert report.exponent == pytest.approx(1.0)


def test_ultralocal_matrix_is_vacuously_quasidiagonal():
    report = quasidiagonality(np.eye(32), alpha=1.0)
    assert report.vacuous
    assert report.passed
    assert report.exponent is None


def test_quasidiagonality_needs_eight_sites():
    with pytest.raises(ValueError):
        quasidiagonality(np.eye(7), alpha=1.0)


def test_pip_cylinder_is_quasidiagonal():
    report = quasidiagonality(cylinder_projectors(pip_model(), 24, 48), alpha=1.0)
    assert report.passed
