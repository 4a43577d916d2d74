"""
Application configuration settings
"""
from pathlib import Path
from typing import Any, List, Optional, Union

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="TURNKAN_",
        case_sensitive=False,
        protected_namespaces=("settings_",),
    )

    # Application
    app_name: str = Field(default="turnkan", description="Application name")
    app_version: str = Field(default="0.1.0", description="Application version")
    debug: bool = Field(default=False, description="Debug mode")
    log_level: Optional[str] = Field(
        default=None, description="Explicit log level, overrides debug"
    )

    # Experiments
    default_seed: int = Field(default=0, description="Seed used when none is given")
    output_dir: Path = Field(default=Path("runs"), description="Root of run directories")
    window_size: int = Field(
        default=20, description="Common window size for compare modes"
    )
    max_workers: int = Field(
        default=1, ge=1, description="Concurrent model trainings in compare modes"
    )

    # Training
    epochs: int = Field(default=50, ge=1, description="Full-batch training epochs")
    mlp_kan_learning_rate: float = Field(
        default=1e-3, gt=0, description="Adam learning rate for MLP and KAN"
    )
    adam_beta1: float = Field(default=0.9, description="Adam first-moment decay")
    adam_beta2: float = Field(default=0.999, description="Adam second-moment decay")
    adam_eps: float = Field(default=1e-8, description="Adam denominator epsilon")

    # Hyperparameter search
    hyperopt_budget: int = Field(default=30, ge=1, description="Evaluations per search")
    hyperopt_initial_points: int = Field(
        default=10, ge=1, description="Space-filling suggestions before the surrogate"
    )
    hyperopt_candidates: int = Field(
        default=1000, ge=1, description="Candidates scored by expected improvement"
    )
    gp_noise: float = Field(default=1e-6, gt=0, description="GP observation noise")
    ei_xi: float = Field(default=0.01, ge=0, description="Expected-improvement margin")
    validation_fraction: float = Field(
        default=0.1, gt=0, lt=1, description="Stratified validation hold-out"
    )

    # Statistics and benchmarking
    significance_level: float = Field(default=0.05, description="Alpha for verdicts")
    bench_repetitions: int = Field(default=100, ge=30, description="Latency repetitions")

    # Data
    csv_significant_digits: int = Field(
        default=17, ge=6, le=17, description="Significant digits for CSV export"
    )

    # Serving
    model_path: Optional[Path] = Field(
        default=None, description="Trained model served by the inference API"
    )
    allowed_origins: Union[List[str], str] = Field(
        default=["http://localhost:5173", "http://localhost:3000"],
        description="Allowed CORS origins",
    )

    @field_validator("allowed_origins", mode="before")
    @classmethod
    def parse_allowed_origins(cls, v: Any) -> List[str]:
        if isinstance(v, str):
            return [origin.strip() for origin in v.split(",")]
        return v


# Global settings instance
settings = Settings()
