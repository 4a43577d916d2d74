"""
Synthetic subject profile schemas
"""
from typing import List

from pydantic import BaseModel, Field, model_validator


class ClassProportions(BaseModel):
    """Target share of SW, ST and SP samples"""
    SW: float = Field(gt=0, lt=1, description="Straight-walking share")
    ST: float = Field(gt=0, lt=1, description="Turn-stance share")
    SP: float = Field(gt=0, lt=1, description="Pre-turn swing share")

    @model_validator(mode="after")
    def check_total(self) -> "ClassProportions":
        total = self.SW + self.ST + self.SP
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"proportions must sum to 1, got {total:.6f}")
        return self


class SubjectProfile(BaseModel):
    """Knobs of the synthetic gait generator for one subject"""
    subject_id: str = Field(min_length=1, description="Subject identifier")
    cadence_hz: float = Field(default=0.9, gt=0.3, lt=2.0, description="Strides per second")
    amp: List[float] = Field(
        default=[2.0, 3.0, 1.5, 1.0, 0.6, 0.8],
        min_length=6,
        max_length=6,
        description="Amplitude per channel: accel x,y,z (m/s^2), gyro x,y,z (rad/s)",
    )
    noise_sigma: float = Field(
        default=0.1, ge=0, description="Gaussian noise std relative to channel amplitude"
    )
    trials_per_cell: int = Field(default=3, ge=1, description="Trials per (turn type, stiffness)")
    straight_trials: int = Field(default=10, ge=4, description="Straight-walking trials")
    ltest_trials: int = Field(default=3, ge=0, description="L-test trials")
    separation: float = Field(default=4.0, ge=0, description="Strength of the SP and ST signatures")
    length_jitter: float = Field(
        default=0.05, ge=0, lt=0.5, description="Relative jitter of straight-walking segments"
    )
    target_proportions: ClassProportions = Field(description="Target class shares")
