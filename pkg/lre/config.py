from pathlib import Path
from typing import Optional, Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# =========================
# Configuration (ENV-DRIVEN via Pydantic)
# =========================


class Settings(BaseSettings):
    """Toolkit settings read from environment and validated by Pydantic.

    Only a single `.env` file at the project root is read. Real environment
    variables always take precedence over `.env` values; command-line flags
    take precedence over both.
    """

    model_config = SettingsConfigDict(
        extra="ignore",
        case_sensitive=False,
        env_file=str(Path(__file__).resolve().parent.parent / ".env"),
        env_file_encoding="utf-8",
    )

    # Reproducibility / parallelism
    seed: int = Field(default=0, ge=0, alias="LRE_SEED")
    threads: int = Field(default=1, ge=1, le=256, alias="LRE_THREADS")

    # Noise model (amplitude damping after every gate)
    p1: float = Field(default=0.04, ge=0.0, le=1.0, alias="LRE_P1")
    p2: float = Field(default=0.08, ge=0.0, le=1.0, alias="LRE_P2")
    max_qubits: int = Field(default=10, ge=1, le=14, alias="LRE_MAX_QUBITS")

    # Experiment defaults
    shots: int = Field(default=1_000_000, ge=0, alias="LRE_SHOTS")
    trials: int = Field(default=10, ge=1, alias="LRE_TRIALS")
    delta: int = Field(default=2, ge=2, alias="LRE_DELTA")

    # Cache of exact simulator values
    cache_type: Literal["SimpleCache", "NullCache"] = Field(default="SimpleCache", alias="LRE_CACHE_TYPE")
    cache_threshold: int = Field(default=4096, ge=1, alias="LRE_CACHE_THRESHOLD")

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(default="WARNING", alias="LRE_LOG_LEVEL")

    @field_validator("delta")
    @classmethod
    def _even_delta(cls, v: int) -> int:
        if v % 2:
            raise ValueError("LRE_DELTA must be even")
        return v

    @field_validator("log_level", mode="before")
    @classmethod
    def _upper_log_level(cls, v):
        if isinstance(v, str):
            return v.upper()
        return v

    @field_validator("cache_type", mode="before")
    @classmethod
    def _canonical_cache_type(cls, v):
        if isinstance(v, str):
            return {"simplecache": "SimpleCache", "nullcache": "NullCache"}.get(v.lower(), v)
        return v


# Singleton accessor to avoid repeated disk reads/parsing
_settings_singleton: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the singleton Settings instance, initializing it on first call."""
    global _settings_singleton
    if _settings_singleton is None:
        _settings_singleton = Settings()
    return _settings_singleton
