"""
Standardized response schemas
"""
from typing import Generic, List, Optional, TypeVar

from pydantic import BaseModel, Field, field_validator

from turnkan.data.labels import NUM_CHANNELS

T = TypeVar("T")


class DataResponse(BaseModel, Generic[T]):
    """Standardized successful response with data"""
    success: bool = Field(default=True, description="Whether the request was successful")
    data: T = Field(description="Response data")
    message: Optional[str] = Field(None, description="Success message")


class ErrorResponse(BaseModel):
    """Standardized error response"""
    success: bool = Field(default=False, description="Always false for error responses")
    error: dict = Field(description="Error details")
    message: Optional[str] = Field(None, description="Error message")


class PredictRequest(BaseModel):
    """One window of six-channel samples, oldest sample first"""
    window: List[List[float]] = Field(min_length=1, description="window_size rows of acc_x..gyro_z")

    @field_validator("window")
    @classmethod
    def check_rows(cls, v: List[List[float]]) -> List[List[float]]:
        for index, row in enumerate(v):
            if len(row) != NUM_CHANNELS:
                raise ValueError(f"row {index} has {len(row)} values, expected {NUM_CHANNELS}")
        return v


class Prediction(BaseModel):
    label: str = Field(description="Most probable class")
    probabilities: dict = Field(description="Class probability by label")


class ModelInfo(BaseModel):
    family: str
    window_size: int
    num_parameters: int
    seed: int
    labels: List[str]
    config: dict
