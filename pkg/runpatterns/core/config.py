"""Application configuration management."""
from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from runpatterns import __version__


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="RUNPATTERNS_",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    # Application
    APP_NAME: str = Field(default="runpatterns")
    APP_VERSION: str = Field(default=__version__)

    # Numerical tolerances
    NEGATIVE_CLAMP_TOLERANCE: float = Field(default=1e-12, gt=0)
    PMF_SUM_TOLERANCE: float = Field(default=1e-10, gt=0)
    STOCHASTIC_ROW_TOLERANCE: float = Field(default=1e-12, gt=0)

    # Waiting-time truncation
    WAITING_TAIL_EPSILON: float = Field(default=1e-12, gt=0)
    WAITING_MMAX_CAP: int = Field(default=10_000, ge=1)
    SOLVE_COEFFICIENT_FLOOR: float = Field(default=1e-15, gt=0)

    # Enumeration budgets
    ORACLE_MAX_N: int = Field(default=22, ge=0)
    ORACLE_CHUNK_SIZE: int = Field(default=4096, ge=1)
    FIB_MAX_INDEX: int = Field(default=40, ge=1)
    FIB_MODEL_MAX_LENGTH: int = Field(default=200_000, ge=1)

    # Cross-check driver
    CHECK_WORKERS: int = Field(default=4, ge=1)
    CHECK_ORACLE_TOLERANCE: float = Field(default=1e-10, gt=0)
    CHECK_EXPLICIT_TOLERANCE: float = Field(default=1e-8, gt=0)
    CHECK_SERIES_MMAX: int = Field(default=80, ge=1)

    # Logging
    LOG_LEVEL: str = Field(default="WARNING")
    LOG_FORMAT: str = Field(default="console")

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        """Accept lower-case level names."""
        if isinstance(v, str):
            return v.upper()
        return v

    @field_validator("LOG_FORMAT")
    @classmethod
    def check_log_format(cls, v: str) -> str:
        """Only json and console renderers exist."""
        if v not in ("json", "console"):
            raise ValueError("LOG_FORMAT must be 'json' or 'console'")
        return v


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
