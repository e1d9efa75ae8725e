"""Tensor audit pipeline."""

import numpy as np

from src.channels.channel import random_channel
from src.core.correlation import CorrelationMatrix
from src.graph.workflow import TensorAudit
from src.isotns.tensor import IsoTensor, Leg, LegName, dilate_channel
from src.models.kitaev import kitaev_tensor


def test_kitaev_audit():
    result = TensorAudit(grid=16).invoke(kitaev_tensor())
    report = result["report"]
    assert report["passed"]
    assert report["kind"] == "mps"
    assert report["preserved_count"] == 1
    assert report["odd_preserved"]
    assert report["spectral_radius"] == 0.0
    assert report["correlation_length_bound"] is None
    assert np.allclose(report["bulk_lambdas"], [0.0])


def test_dissipative_mps_audit(rng):
    tensor = dilate_channel(random_channel(rng, 2, s_max=0.5))
    report = TensorAudit().invoke(tensor)["report"]
    assert report["passed"]
    assert report["preserved_count"] == 0
    assert 0.0 < report["spectral_radius"] <= 0.5 + 1e-12
    assert report["correlation_length_bound"] > 0.0
    assert len(report["bulk_lambdas"]) == 2


def test_lightlike_audit(lightlike_tensor):
    result = TensorAudit(grid=64).invoke(lightlike_tensor)
    report = result["report"]
    assert report["kind"] == "lightlike"
    assert report["grid"] == 64
    assert report["flagged_momenta"] == []
    assert report["generic_preserved_dimension"] == 0
    assert report["passed"]
    assert report["continuity"]["certified"]
    assert result["spectrum"].branch_count == 2


def test_invalid_tensor_stops_after_validation():
    legs = [Leg(name=LegName.P, modes=2), Leg(name=LegName.V_T, modes=2), Leg(name=LegName.V_B, modes=2)]
    tensor = IsoTensor(legs=legs, Lambda=CorrelationMatrix.vacuum(6).data)
    result = TensorAudit().invoke(tensor)
    assert not result["report"]["passed"]
    assert "kind" not in result["report"]
    assert "channel" not in result
