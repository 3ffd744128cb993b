"""
hetcache - Configuration Module

This module defines the library settings using pydantic-settings. Values are
read from environment variables (prefix ``HETCACHE_``) or a ``.env`` file,
validated, and exposed through the module-level ``settings`` instance.
"""
from typing import Any

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


VALID_LOG_LEVELS = ("debug", "info", "warning", "error", "critical")


class Settings(BaseSettings):
    """
    Runtime settings for the analysis and simulation services.

    Settings are grouped by concern. Defaults reproduce the documented
    behaviour; environment overrides exist for experimentation and CI.
    """

    #-----------------------------------------------
    # APPLICATION SETTINGS
    #-----------------------------------------------
    LOG_LEVEL: str = Field(
        "warning",
        description="Logging level (debug, info, warning, error, critical)"
    )
    LOG_FORMAT: str = Field(
        "%(asctime)s %(levelname)s [%(name)s] %(message)s",
        description="Format string for log records written to stderr"
    )

    #-----------------------------------------------
    # ENUMERATION
    #-----------------------------------------------
    ENUMERATION_CAP: int = Field(
        10_000_000,
        description="Largest demand set that may be enumerated exhaustively"
    )

    #-----------------------------------------------
    # OPTIMIZER
    #-----------------------------------------------
    OPTIMIZER_GRID_POINTS: int = Field(
        1001,
        description="Number of beta grid points probed before golden-section refinement"
    )
    OPTIMIZER_TOLERANCE: float = Field(
        1e-9,
        description="Final bracket width in beta for golden-section refinement"
    )
    CONVEXITY_TOLERANCE: float = Field(
        1e-9,
        description="Slack allowed on second differences in the convexity scan"
    )

    #-----------------------------------------------
    # NUMERICAL TOLERANCES
    #-----------------------------------------------
    ABSOLUTE_TOLERANCE: float = Field(
        1e-9,
        description="Absolute tolerance for real-valued comparisons"
    )
    RELATIVE_TOLERANCE: float = Field(
        1e-12,
        description="Relative window for snapping split parameters to integers and for real versus exact agreement"
    )

    #-----------------------------------------------
    # SWEEPS AND REPORTS
    #-----------------------------------------------
    SWEEP_POINTS: int = Field(
        101,
        description="Uniform points in the default memory grid"
    )
    SIGNIFICANT_DIGITS: int = Field(
        12,
        description="Significant digits for every number written to stdout or CSV"
    )

    #-----------------------------------------------
    # SIMULATION
    #-----------------------------------------------
    DEFAULT_SEED: int = Field(
        0,
        description="Seed of the pseudo-random file library when none is given"
    )
    VERIFY_SEED_COUNT: int = Field(
        3,
        description="Number of consecutive seeds used by the decodability suite"
    )
    DEFAULT_FILE_SIZE_BITS: int = Field(
        720,
        description="File size B in bits when a scenario omits it"
    )

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalise_log_level(cls, v: Any) -> str:
        """Accept any casing and reject unknown levels."""
        level = str(v).lower()
        if level not in VALID_LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL must be one of: {', '.join(VALID_LOG_LEVELS)}")
        return level

    @field_validator("OPTIMIZER_GRID_POINTS")
    @classmethod
    def validate_grid_points(cls, v: int) -> int:
        if v < 3:
            raise ValueError("OPTIMIZER_GRID_POINTS must be at least 3")
        return v

    @field_validator(
        "OPTIMIZER_TOLERANCE",
        "CONVEXITY_TOLERANCE",
        "ABSOLUTE_TOLERANCE",
        "RELATIVE_TOLERANCE",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("tolerances must be positive")
        return v

    @field_validator("VERIFY_SEED_COUNT", "SWEEP_POINTS", "SIGNIFICANT_DIGITS")
    @classmethod
    def validate_at_least_one(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("DEFAULT_SEED")
    @classmethod
    def validate_seed(cls, v: int) -> int:
        if not 0 <= v < 2**64:
            raise ValueError("DEFAULT_SEED must be an unsigned 64-bit integer")
        return v

    model_config = SettingsConfigDict(
        env_prefix="HETCACHE_",
        case_sensitive=True,
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        validate_default=True,
    )


# Create a global settings instance
settings = Settings()
