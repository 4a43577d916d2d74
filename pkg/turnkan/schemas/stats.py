"""
Hypothesis-test schemas
"""
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class PairedScores(BaseModel):
    """Scores of two conditions measured on the same units"""
    a: List[float] = Field(description="Condition A scores")
    b: List[float] = Field(description="Condition B scores")
    label_a: str = Field(default="A", description="Condition A name")
    label_b: str = Field(default="B", description="Condition B name")

    @model_validator(mode="after")
    def check_pairs(self) -> "PairedScores":
        if len(self.a) != len(self.b):
            raise ValueError(f"{len(self.a)} scores for A but {len(self.b)} for B")
        if len(self.a) < 2:
            raise ValueError("need at least 2 pairs")
        if any(not 0.0 <= s <= 1.0 for s in self.a + self.b):
            raise ValueError("scores must lie in [0, 1]")
        return self


class TestResult(BaseModel):
    """One-sided test of A > B"""
    method: str = Field(description="wilcoxon-exact, paired-t or jzs")
    statistic: float = Field(description="W+ for Wilcoxon, t for the t-test")
    p_value: float = Field(ge=0, le=1, description="One-sided p-value")
    n: int = Field(description="Pairs used after dropping zero differences")
    direction: str = Field(description="Alternative hypothesis, e.g. 'KAN > MLP'")
    bayes_factor: Optional[float] = Field(default=None, description="One-sided JZS BF10")


class Comparison(BaseModel):
    """Outcome of one paired comparison inside the harness"""
    subject: str
    label_a: str
    label_b: str
    fold_checksum: Optional[str] = None
    mean_a: float
    mean_b: float
    result: Optional[TestResult] = None
    significant: bool = False
    verdict: str


class HarnessReport(BaseModel):
    """Per-subject Wilcoxon comparisons plus across-subject t-tests"""
    hypothesis: str
    significance_level: float
    per_subject: List[Comparison]
    across_subjects: List[Comparison]
