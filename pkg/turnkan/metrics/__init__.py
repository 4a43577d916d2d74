from turnkan.metrics.classification import (
    ClassScores,
    ConfusionMatrix,
    confusion,
    macro_f1,
    macro_f1_score,
    majority_baseline,
    per_class_scores,
)
from turnkan.metrics.weights import ClassWeights, class_weights

__all__ = [
    "ClassScores",
    "ClassWeights",
    "ConfusionMatrix",
    "class_weights",
    "confusion",
    "macro_f1",
    "macro_f1_score",
    "majority_baseline",
    "per_class_scores",
]
