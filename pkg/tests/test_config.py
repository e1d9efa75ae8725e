"""YAML defaults and environment settings."""

import src.utils.config as config_module
from src.cli.app import EXIT_PASS, run
from src.utils.config import ConfigLoader, Settings


def test_defaults_are_loaded():
    loader = ConfigLoader()
    assert loader.get("momentum.overlap_threshold") == 0.7
    assert loader.get("models.pip.y_cut") == 12
    assert loader.get("topology.quasidiagonal_alpha") == 1.0
    assert loader.get("models.pip.crossing_tol") == 0.05


def test_missing_key_returns_default():
    loader = ConfigLoader()
    assert loader.get("momentum.unknown", 3) == 3
    assert loader.get("momentum.decay.fit_tol.deeper", "x") == "x"


def test_user_file_overrides_nested_values(tmp_path):
    user = tmp_path / "user.yaml"
    user.write_text("momentum:\n  decay:\n    fit_tol: 0.2\noracle:\n  circuits: 3\n", encoding="utf-8")
    loader = ConfigLoader(user_path=str(user))
    assert loader.get("momentum.decay.fit_tol") == 0.2
    assert loader.get("momentum.decay.floor") == 1.0e-14
    assert loader.get("oracle.circuits") == 3
    assert loader.get("oracle.sites") == 4


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("GFISO_N_JOBS", "4")
    monkeypatch.setenv("GFISO_OUTPUT_DIR", "/tmp/elsewhere")
    settings = Settings()
    assert settings.n_jobs == 4
    assert settings.output_dir == "/tmp/elsewhere"
    assert settings.log_level == "INFO"


def test_environment_is_read_at_run_time(monkeypatch, tmp_path, data_dir):
    assert not hasattr(config_module, "settings")
    assert not hasattr(config_module, "config_loader")
    target = tmp_path / "from_env"
    monkeypatch.setenv("GFISO_OUTPUT_DIR", str(target))
    assert run(["validate-channel", str(data_dir / "identity.json")]) == EXIT_PASS
    assert (target / "manifest.json").exists()
