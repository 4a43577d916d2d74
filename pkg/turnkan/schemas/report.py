"""
Evaluation and timing report schemas
"""
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from turnkan.schemas.model import ModelFamily


class EvalReport(BaseModel):
    """Scores of one trained model on one subject's test windows"""
    subject: str = Field(description="Subject whose test windows were scored")
    model: str = Field(description="Model label, e.g. 'KAN' or 'KAN-pooled'")
    family: ModelFamily = Field(description="Classifier family")
    window_size: int = Field(description="Samples per window")
    n_windows: int = Field(ge=1, description="Scored test windows")
    macro_f1: float = Field(ge=0, le=1, description="Mean of the per-class F1 values")
    precision: List[float] = Field(description="Per-class precision in label order")
    recall: List[float] = Field(description="Per-class recall in label order")
    f1: List[float] = Field(description="Per-class F1 in label order")
    confusion: List[List[int]] = Field(description="Counts, true label on rows")
    confusion_normalized: List[List[float]] = Field(description="Row-normalized counts")
    division_scores: List[float] = Field(description="Macro-F1 on each test division")
    fold_checksum: str = Field(description="SHA-256 of the division assignment")
    majority_baseline: Optional[float] = Field(
        default=None, ge=0, le=1, description="Macro-F1 of always predicting the training majority class"
    )

    @model_validator(mode="after")
    def check_scores(self) -> "EvalReport":
        scores = self.precision + self.recall + self.f1 + self.division_scores
        if any(not 0.0 <= s <= 1.0 for s in scores):
            raise ValueError("scores must lie in [0, 1]")
        if self.f1 and abs(sum(self.f1) / len(self.f1) - self.macro_f1) > 1e-12:
            raise ValueError("macro_f1 must equal the mean of the per-class F1 values")
        return self

    @property
    def division_mean(self) -> float:
        return sum(self.division_scores) / len(self.division_scores)


class TimingRecord(BaseModel):
    """Training time and single-window latency of one model"""
    subject: str
    model: str
    family: ModelFamily
    num_parameters: int = Field(ge=0)
    train_seconds: float = Field(ge=0)
    inference_seconds: Optional[float] = Field(default=None, ge=0, description="Median per-window latency")


class ProportionRecord(BaseModel):
    """Window class shares of one side of a subject's split"""
    subject: str
    side: str = Field(description="train or test")
    window_size: int
    n_windows: int
    SW: float
    ST: float
    SP: float
