"""
Configuration module for bincompletion
Environment-based settings for solver limits, benchmark runs and logging
"""

import os
from typing import Any, Dict, Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import ConfigError


class SolverSettings(BaseSettings):
    """
    Settings for the bin-completion solvers and the benchmark CLI.

    Loads values from ``BINCOMP_*`` environment variables (or a ``.env`` file)
    with defaults suited to benchmark runs.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="BINCOMP_",
        case_sensitive=False,
        extra="ignore",
    )

    # Search limits
    time_limit: float = Field(
        default=300.0,
        description="Per-instance wall-clock limit in seconds",
        gt=0,
        le=86400,
    )
    node_limit: Optional[int] = Field(
        default=None,
        description="Optional cap on expanded nodes per solve",
        ge=1,
    )

    # Search strategy
    default_pruning: Literal["none", "np", "ndp"] = Field(
        default="ndp",
        description="Nogood pruning policy used when none is given",
    )
    covering_h: int = Field(
        default=100,
        description="Hybrid incremental batch width for bin covering",
        ge=1,
    )
    ndp_depth_limit: Optional[int] = Field(
        default=None,
        description="Apply dominance pruning only down to this depth (None = unlimited)",
        ge=0,
    )

    # Oracle and generation
    oracle_max_items: int = Field(
        default=16,
        description="Largest instance the exhaustive oracle accepts",
        ge=1,
        le=20,
    )
    generation_budget: int = Field(
        default=100_000,
        description="Rejection-sampling attempts per generated instance",
        ge=1,
    )

    # Benchmark harness
    bench_workers: int = Field(
        default=1,
        description="Parallel worker processes for bench",
        ge=1,
        le=64,
    )

    # Logging Configuration
    log_level: str = Field(
        default="INFO",
        description="Logging level"
    )
    log_format: str = Field(
        default="text",
        description="Log format: 'json' or 'text'"
    )

    # Development Configuration
    debug: bool = Field(
        default=False,
        description="Enable debug mode"
    )
    development_mode: bool = Field(
        default=False,
        description="Enable development mode with additional logging"
    )

    @field_validator("default_pruning", mode="before")
    @classmethod
    def normalize_pruning(cls, v):
        return v.lower() if isinstance(v, str) else v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {valid_levels}")
        return v.upper()

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v):
        """Validate log format."""
        valid_formats = ["json", "text"]
        if v.lower() not in valid_formats:
            raise ValueError(f"Log format must be one of: {valid_formats}")
        return v.lower()

    def is_production(self) -> bool:
        """Check if running in production mode."""
        return not (self.debug or self.development_mode)

    def get_logging_config(self) -> Dict[str, Any]:
        """Get logging configuration."""
        return {
            "level": self.log_level,
            "format": self.log_format,
            "debug": self.debug,
            "development_mode": self.development_mode,
        }

    def get_solver_defaults(self) -> Dict[str, Any]:
        """Keyword arguments for building a SolverConfig."""
        return {
            "pruning": self.default_pruning,
            "time_limit": self.time_limit,
            "node_limit": self.node_limit,
            "ndp_depth_limit": self.ndp_depth_limit,
        }


class DevelopmentConfig(SolverSettings):
    """Development settings with verbose logging."""

    model_config = SettingsConfigDict(
        env_file=".env.development",
        env_prefix="BINCOMP_",
        case_sensitive=False,
        extra="ignore",
    )

    debug: bool = True
    development_mode: bool = True
    log_level: str = "DEBUG"


class ProductionConfig(SolverSettings):
    """Production settings: benchmark limits, quiet logs."""

    model_config = SettingsConfigDict(
        env_file=".env.production",
        env_prefix="BINCOMP_",
        case_sensitive=False,
        extra="ignore",
    )

    debug: bool = False
    development_mode: bool = False
    log_level: str = "INFO"


class TestingConfig(SolverSettings):
    """Settings for unit tests: short limits, serial bench."""

    model_config = SettingsConfigDict(
        env_file=".env.testing",
        env_prefix="BINCOMP_",
        case_sensitive=False,
        extra="ignore",
    )

    debug: bool = True
    development_mode: bool = True
    log_level: str = "DEBUG"
    time_limit: float = 30.0
    bench_workers: int = 1


def get_config(environment: Optional[str] = None) -> SolverSettings:
    """
    Get settings for an environment.

    Args:
        environment: 'development', 'production' or 'testing' (or dev/prod/test).
                     If None, uses BINCOMP_ENVIRONMENT or defaults to 'production'

    Returns:
        Settings instance for the environment

    Raises:
        ConfigError: if the settings fail validation
    """

    if environment is None:
        environment = os.getenv("BINCOMP_ENVIRONMENT", "production")
    environment = environment.lower()

    config_map = {
        "development": DevelopmentConfig,
        "dev": DevelopmentConfig,
        "production": ProductionConfig,
        "prod": ProductionConfig,
        "testing": TestingConfig,
        "test": TestingConfig,
    }

    config_class = config_map.get(environment, ProductionConfig)

    try:
        return config_class()
    except Exception as e:
        raise ConfigError(
            f"Failed to load configuration for environment '{environment}'",
            config_key="environment",
            config_value=environment,
            cause=e,
        ) from e
