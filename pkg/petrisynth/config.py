"""Configuration management for petrisynth."""

from typing import Literal, Self

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class SearchConfig(BaseModel):
    """Bounds and resources for the incremental (n, b) search."""

    n_min: int = Field(default=1, ge=1)
    n_max: int = Field(default=30, ge=1)
    b_min: int = Field(default=1, ge=1)
    b_max: int = Field(default=6, ge=1)
    order: Literal["b-major"] = "b-major"
    attempt_timeout: float = Field(default=60.0, gt=0)
    max_iterations: int | None = Field(default=None, gt=0)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def validate_ranges(self) -> Self:
        """Validate that every lower bound is at most its upper bound."""
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        if self.b_min > self.b_max:
            raise ValueError("b_min must not exceed b_max")
        return self

    def attempts(self) -> list[tuple[int, int]]:
        """(n, b) pairs in search order: b ascending, n ascending within each b."""
        return [
            (n, b)
            for b in range(self.b_min, self.b_max + 1)
            for n in range(self.n_min, self.n_max + 1)
        ]


class Settings(BaseSettings):
    """Process-wide settings, read from PETRISYNTH_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="PETRISYNTH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging and tracing
    log_level: str = Field(default="INFO")
    structured_logs: bool = Field(default=True)
    otel_service_name: str = Field(default="petrisynth")
    otel_exporter_otlp_endpoint: str | None = Field(default=None)
    otel_traces_sampler_arg: float = Field(default=1.0, ge=0.0, le=1.0)
    otel_console_exporter: bool = Field(default=False)

    # Prometheus text dump
    metrics_file: str | None = Field(default=None)

    # Construction caps
    unfolding_node_cap: int = Field(default=100_000, gt=0)
    game_state_cap: int = Field(default=1_000_000, gt=0)
    translation_copy_cap: int = Field(default=200_000, gt=0)
    brute_force_cap: int = Field(default=24, gt=0, le=30)
    reachability_limit: int = Field(default=1_000_000, gt=0)

    # External QCIR solver protocol
    external_solver_command: str | None = Field(default=None)
    external_sat_exit_code: int = Field(default=10)
    external_unsat_exit_code: int = Field(default=20)

    # Search defaults
    n_max: int = Field(default=30, ge=1)
    b_max: int = Field(default=6, ge=1)
    attempt_timeout: float = Field(default=60.0, gt=0)
    workers: int = Field(default=1, ge=1)

    # Run-record store
    db_path: str | None = Field(default=None)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {valid_levels}")
        return v.upper()

    @field_validator("external_solver_command")
    @classmethod
    def validate_external_solver_command(cls, v: str | None) -> str | None:
        """Validate that a solver command template names the input file."""
        if v is not None and v.strip() and "{file}" not in v:
            raise ValueError("external_solver_command must contain a {file} placeholder")
        return v or None

    def search_config(self) -> SearchConfig:
        """Build the default search configuration from these settings."""
        return SearchConfig(
            n_max=self.n_max,
            b_max=self.b_max,
            attempt_timeout=self.attempt_timeout,
            workers=self.workers,
        )
