"""
Experiment configuration and run artifacts
"""
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from turnkan.config import settings
from turnkan.schemas.hyperopt import TrialRecord
from turnkan.schemas.model import ModelConfig, ModelFamily
from turnkan.schemas.profile import SubjectProfile
from turnkan.schemas.report import EvalReport, ProportionRecord, TimingRecord
from turnkan.schemas.stats import HarnessReport

POOLED = "pooled"


class ExperimentMode(str, Enum):
    GENERATE = "generate"
    TRAIN = "train"
    HYPEROPT = "hyperopt"
    EVALUATE = "evaluate"
    COMPARE_HP1 = "compare-hp1"
    COMPARE_HP2 = "compare-hp2"
    BENCH = "bench"


class ExperimentConfig(BaseModel):
    """
    Everything a run needs; persisted as config.json in the run directory

    ``models`` maps a family name to field overrides applied on top of that
    family's preset, e.g. ``{"KAN": {"grid_size": 5}}``.
    """
    model_config = ConfigDict(extra="forbid", protected_namespaces=())

    mode: ExperimentMode = Field(description="What to run")
    dataset: Optional[Path] = Field(default=None, description="CSV dataset (all modes but generate)")
    profiles: Optional[Path] = Field(default=None, description="Generator profiles (generate)")
    subject: Optional[str] = Field(
        default=None, description="One subject id, 'pooled', or every subject when unset"
    )
    families: List[ModelFamily] = Field(
        default=[ModelFamily.MLP, ModelFamily.KAN, ModelFamily.CNN, ModelFamily.FKAN],
        min_length=1,
        description="Model families to run",
    )
    models: Dict[str, Dict[str, Any]] = Field(default={}, description="Per-family preset overrides")
    model_path: Optional[Path] = Field(default=None, description="Trained model (evaluate, bench)")
    seed: int = Field(
        default_factory=lambda: settings.default_seed,
        description="Seed of splits, divisions, initialization and search",
    )
    output_dir: Path = Field(default=Path("runs/latest"), description="Run directory")
    budget: Optional[int] = Field(default=None, ge=1, description="Hyperparameter search evaluations")
    window_size: Optional[Literal[10, 20, 30]] = Field(
        default=None, description="Window size override for every model"
    )
    epochs: Optional[int] = Field(default=None, ge=0, description="Training epochs override")
    smoothing: bool = Field(default=True, description="Seven-point moving average before windowing")
    repetitions: Optional[int] = Field(default=None, ge=30, description="Latency repetitions (bench)")

    @field_validator("models")
    @classmethod
    def check_model_keys(cls, v: Dict[str, Dict[str, Any]]) -> Dict[str, Dict[str, Any]]:
        for key in v:
            ModelFamily(key)
        return v

    @model_validator(mode="after")
    def check_inputs(self) -> "ExperimentConfig":
        if self.mode != ExperimentMode.GENERATE and self.dataset is None:
            raise ValueError(f"mode {self.mode.value} needs a dataset")
        if self.mode == ExperimentMode.EVALUATE and self.model_path is None:
            raise ValueError("evaluate needs a model_path")
        if self.mode == ExperimentMode.COMPARE_HP2 and self.subject == POOLED:
            raise ValueError("compare-hp2 trains pooled models itself; select one subject or none")
        return self


class RunArtifact(BaseModel):
    """Outputs of one run, rendered to files by the report writer"""
    model_config = ConfigDict(arbitrary_types_allowed=True, protected_namespaces=())

    config: ExperimentConfig
    model_configs: Dict[str, ModelConfig] = Field(default={}, description="Resolved config keyed by 'subject/label'")
    models: Dict[str, Any] = Field(default={}, description="Trained models keyed by 'subject/label'")
    evaluations: List[EvalReport] = Field(default=[])
    stats: List[HarnessReport] = Field(default=[])
    timings: List[TimingRecord] = Field(default=[])
    proportions: List[ProportionRecord] = Field(default=[])
    history: List[TrialRecord] = Field(default=[])
    trials: List[Any] = Field(default=[], description="Generated trials")
    profiles: List[SubjectProfile] = Field(default=[], description="Profiles the trials came from")
    files: List[Path] = Field(default=[], description="Files written for this run")
