"""Configuration management for gfiso."""

from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Run settings loaded from environment variables (prefix GFISO_) and .env."""

    model_config = SettingsConfigDict(
        env_prefix="GFISO_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    output_dir: str = Field(default="./gfiso_output")
    log_level: str = Field(default="INFO")
    n_jobs: int = Field(default=1, description="joblib workers for per-k loops")
    seed: int = Field(default=1234)


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigLoader:
    """Loads numeric defaults from YAML, optionally overlaid by a user file."""

    def __init__(self, config_path: Optional[str] = None, user_path: Optional[str] = None):
        if config_path is None:
            config_path = Path(__file__).parent.parent.parent / "config" / "settings.yaml"
        self.config_path = Path(config_path)
        self.user_path = Path(user_path) if user_path else None
        self._config: Optional[Dict[str, Any]] = None

    def load(self) -> Dict[str, Any]:
        """Load configuration from YAML, user values winning over defaults."""
        if self._config is None:
            with open(self.config_path, "r", encoding="utf-8") as f:
                config = yaml.safe_load(f) or {}
            if self.user_path is not None:
                with open(self.user_path, "r", encoding="utf-8") as f:
                    config = _merge(config, yaml.safe_load(f) or {})
            self._config = config
        return self._config

    def get(self, key_path: str, default: Any = None) -> Any:
        """Get configuration value by dot-separated key path."""
        config = self.load()
        keys = key_path.split(".")
        value = config
        for key in keys:
            if isinstance(value, dict):
                value = value.get(key)
                if value is None:
                    return default
            else:
                return default
        return value

