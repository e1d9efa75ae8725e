"""Command-line runner: exit codes, artifacts and manifests."""

import hashlib
import json

import pandas as pd
import pytest

from src.cli.app import EXIT_PASS, EXIT_USAGE, EXIT_VIOLATION, run
from src.models.pip import pip_model


def _run(output_dir, *argv):
    return run(["--output-dir", str(output_dir), *argv])


def _manifest(output_dir):
    return json.loads((output_dir / "manifest.json").read_text(encoding="utf-8"))


def test_validate_identity_channel(data_dir, output_dir, capsys):
    assert _run(output_dir, "validate-channel", str(data_dir / "identity.json")) == EXIT_PASS
    assert "isometric: true" in capsys.readouterr().out
    manifest = _manifest(output_dir)
    assert manifest["command"] == "validate-channel"
    assert manifest["passed"]
    assert [a["file"] for a in manifest["artifacts"]] == ["channel_report.json"]


def test_manifest_hashes_match_artifacts(data_dir, output_dir):
    _run(output_dir, "validate-channel", str(data_dir / "two_site.json"))
    for artifact in _manifest(output_dir)["artifacts"]:
        content = (output_dir / artifact["file"]).read_bytes()
        assert hashlib.sha256(content).hexdigest() == artifact["sha256"]


def test_non_isometric_channel_is_reported(data_dir, output_dir, capsys):
    assert _run(output_dir, "validate-channel", str(data_dir / "two_site.json")) == EXIT_PASS
    assert "isometric: false" in capsys.readouterr().out


def test_expanding_channel_is_an_invariant_violation(data_dir, output_dir, capsys):
    assert _run(output_dir, "validate-channel", str(data_dir / "expanding.json")) == EXIT_VIOLATION
    assert "invariant violated: cptp" in capsys.readouterr().out


def test_missing_file_is_a_usage_error(tmp_path, output_dir):
    assert _run(output_dir, "validate-channel", str(tmp_path / "nowhere.json")) == EXIT_USAGE


def test_bad_arguments_are_usage_errors(data_dir, output_dir):
    assert run([]) == EXIT_USAGE
    assert _run(output_dir, "no-such-command") == EXIT_USAGE
    assert _run(output_dir, "brickwall-spectrum", str(data_dir / "two_site.json"), "--grid", "abc") == EXIT_USAGE
    assert _run(output_dir, "brickwall-spectrum", str(data_dir / "two_site.json"), "--grid", "5") == EXIT_USAGE


def test_steady_state(data_dir, output_dir):
    code = _run(
        output_dir,
        "steady-state",
        str(data_dir / "two_site.json"),
        "--boundary",
        str(data_dir / "vacuum_boundary.json"),
    )
    assert code == EXIT_PASS
    steady = json.loads((output_dir / "steady_state.json").read_text(encoding="utf-8"))
    assert steady["preserved_count"] == 0
    assert steady["spectral_radius"] < 1.0
    spectrum = pd.read_csv(output_dir / "steady_spectrum.csv")
    assert len(spectrum) == 2


def test_steady_state_rejects_mismatched_boundary(data_dir, output_dir):
    code = _run(
        output_dir,
        "steady-state",
        str(data_dir / "identity.json"),
        "--boundary",
        str(data_dir / "vacuum_boundary.json"),
    )
    assert code == EXIT_USAGE


def test_brickwall_spectrum(data_dir, output_dir):
    assert _run(output_dir, "brickwall-spectrum", str(data_dir / "two_site.json"), "--grid", "32") == EXIT_PASS
    rows = pd.read_csv(output_dir / "bulk_spectrum.csv")
    assert set(rows.columns) >= {"k", "branch_index", "lambda", "epsilon", "exceptional_flag"}
    assert len(rows) == 32 * 4
    continuity = json.loads((output_dir / "continuity.json").read_text(encoding="utf-8"))
    assert continuity["certified"]


def test_decay_of_reset_circuit(data_dir, output_dir):
    assert _run(output_dir, "decay", str(data_dir / "reset_two_site.json"), "--grid", "64") == EXIT_PASS
    report = json.loads((output_dir / "decay_report.json").read_text(encoding="utf-8"))
    assert report["xi"] == 0.0


def test_decay_beyond_declared_radius_fails(data_dir, output_dir):
    code = _run(output_dir, "decay", str(data_dir / "understated_radius.json"), "--grid", "256")
    assert code == EXIT_VIOLATION
    assert not _manifest(output_dir)["passed"]


def test_tensor_audit_of_kitaev_tensor(data_dir, output_dir):
    assert _run(output_dir, "tensor-audit", str(data_dir / "kitaev_tensor.json")) == EXIT_PASS
    report = json.loads((output_dir / "audit_report.json").read_text(encoding="utf-8"))
    assert report["kind"] == "mps"
    assert report["odd_preserved"]


def test_tensor_audit_of_correlated_tensor(data_dir, output_dir):
    assert _run(output_dir, "tensor-audit", str(data_dir / "correlated_tensor.json")) == EXIT_VIOLATION
    report = json.loads((output_dir / "audit_report.json").read_text(encoding="utf-8"))
    assert not report["passed"]


def test_pip_spectrum(output_dir):
    assert _run(output_dir, "pip-spectrum", "--lx", "8", "--ly", "8", "--ycut", "4") == EXIT_PASS
    rows = pd.read_csv(output_dir / "pip_spectrum.csv")
    assert len(rows) == 8 * 8
    checks = _manifest(output_dir)["checks"]
    assert checks["branches"] == 8
    assert checks["crossing_k"] == 0.0
    assert checks["crossing_abs_epsilon"] <= 0.05
    report = json.loads((output_dir / "pip_report.json").read_text(encoding="utf-8"))
    assert report["passed"]
    assert report["antisymmetry_defect"] <= 1e-8


def test_trivial_pip_spectrum_has_no_crossing(output_dir):
    code = _run(output_dir, "pip-spectrum", "--lx", "8", "--ly", "8", "--ycut", "4", "--mu", "6")
    assert code == EXIT_VIOLATION
    manifest = _manifest(output_dir)
    assert not manifest["passed"]
    assert manifest["checks"]["branches"] == 8
    assert manifest["checks"]["antisymmetry_defect"] <= 1e-8
    assert manifest["checks"]["crossing_abs_epsilon"] > 0.05


def test_pip_spectrum_rejects_bad_cut(output_dir):
    assert _run(output_dir, "pip-spectrum", "--lx", "8", "--ly", "8", "--ycut", "8") == EXIT_USAGE


def test_chern_of_pip_model(output_dir):
    code = _run(output_dir, "chern", "--model", "pip", "--nq", "12", "--ly", "16", "--nqx", "24")
    assert code == EXIT_PASS
    report = json.loads((output_dir / "topology_report.json").read_text(encoding="utf-8"))
    assert abs(report["nu"]) == 1
    assert report["nu_edge"] == report["nu"]
    assert len(pd.read_csv(output_dir / "trace_curve.csv")) == 24


def test_chern_of_model_file(tmp_path, output_dir):
    path = tmp_path / "trivial.json"
    path.write_text(json.dumps(pip_model(mu=6.0).to_dict()), encoding="utf-8")
    code = _run(output_dir, "chern", "--model", str(path), "--nq", "12", "--ly", "16", "--nqx", "24")
    assert code == EXIT_PASS
    checks = _manifest(output_dir)["checks"]
    assert checks["nu"] == 0
    assert checks["nu_edge"] == 0


def test_oracle_check_is_deterministic(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    for target in (first, second):
        assert run(["--output-dir", str(target), "--seed", "7", "oracle-check", "--circuits", "3"]) == EXIT_PASS
    assert (first / "manifest.json").read_bytes() == (second / "manifest.json").read_bytes()
    rows = pd.read_csv(first / "isospectral.csv")
    assert len(rows) == 6
    assert sorted(rows["input"].unique()) == ["cat", "product"]
    assert rows.groupby("circuit")["t0"].nunique().eq(1).all()
    assert (rows["mismatch"] <= 1e-10).all()


@pytest.mark.slow
def test_pip_spectrum_at_full_size(output_dir):
    assert _run(output_dir, "pip-spectrum", "--lx", "24", "--ly", "24", "--ycut", "12") == EXIT_PASS
    checks = _manifest(output_dir)["checks"]
    assert checks["crossing_k"] == 0.0
    assert checks["crossing_abs_epsilon"] <= 0.05
