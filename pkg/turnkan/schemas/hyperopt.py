"""
Hyperparameter search records
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class TrialRecord(BaseModel):
    """One evaluated point of a search"""
    index: int = Field(ge=0, description="Position in the search history")
    config: Dict[str, Any] = Field(description="Decoded configuration")
    point: List[float] = Field(description="Encoded coordinates")
    objective: float = Field(ge=0, le=1, description="Validation macro-F1")
    seconds: float = Field(ge=0, description="Wall time of the evaluation")
    seed: int = Field(description="Search seed")
    space: Optional[str] = Field(default=None, description="Name of the search space")
    error: Optional[str] = Field(default=None, description="Failure message when the objective raised")
