from __future__ import annotations

import os
from pathlib import Path

import yaml
from pydantic import BaseModel, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class NumericsConfig(BaseModel):
    """Numeric defaults bundled in ``config/config.yaml``."""

    eigen_tol: float = 1e-14
    eigen_restarts: int = 3
    degeneracy_rtol: float = 1e-10
    eps_zero: float = 1e-12
    eps_det_rel: float = 1e-12
    clamp_floor: float = -1e-12
    deriv_step: float = 1e-3
    critical_step: float = 2.5e-4
    critical_window: float = 0.05
    oracle_delta: float = 1e-3
    peak_h_lo: float = 0.5
    peak_h_hi: float = 1.3
    peak_tol_h: float = 1e-5
    prescan_points: int = 32
    collapse_nu: float = 2.0 / 3.0
    thermo_points: int = 16
    thermo_curvature_limit: float = 3.0
    cache_size: int = 512

    @model_validator(mode="after")
    def _check_ranges(self):  # type: ignore[override]
        positive = (
            "eigen_tol", "degeneracy_rtol", "eps_zero", "eps_det_rel", "deriv_step",
            "critical_step", "critical_window", "oracle_delta", "peak_tol_h",
            "collapse_nu", "thermo_curvature_limit",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.clamp_floor > 0:
            raise ValueError("clamp_floor must be <= 0")
        if not 0 <= self.peak_h_lo < self.peak_h_hi:
            raise ValueError("peak bracket must satisfy 0 <= peak_h_lo < peak_h_hi")
        if self.prescan_points < 3 or self.thermo_points < 3:
            raise ValueError("prescan_points and thermo_points must be >= 3")
        if self.eigen_restarts < 0 or self.cache_size < 0:
            raise ValueError("eigen_restarts and cache_size must be >= 0")
        return self


class Settings(BaseSettings):
    """Runtime settings from the environment (``LMG_*``), ``.env`` and the bundled YAML."""

    LOG_LEVEL: str = "INFO"
    MAX_WORKERS: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    numerics: NumericsConfig = Field(default_factory=NumericsConfig)

    model_config = SettingsConfigDict(
        env_prefix="LMG_",
        env_file=Path(__file__).resolve().parent.parent / ".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


CONFIG_PATH = Path(__file__).resolve().parent / "config" / "config.yaml"


def load_settings(config_path: Path = CONFIG_PATH) -> Settings:
    settings = Settings()
    if config_path.exists():
        with config_path.open("r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}
        settings.numerics = NumericsConfig.model_validate(raw.get("numerics") or {})
    return settings


settings = load_settings()

__all__ = ["NumericsConfig", "Settings", "settings", "load_settings"]
