"""
Confusion matrices and F1 scores over the (SW, ST, SP) label set
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from turnkan.data.labels import NUM_CLASSES
from turnkan.utils.exceptions import DomainError, ShapeError


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with true labels on rows and predictions on columns"""
    counts: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def normalized(self) -> np.ndarray:
        """Row-normalized view; rows without support stay zero"""
        support = self.support[:, None].astype(np.float64)
        return np.divide(self.counts, support, out=np.zeros(self.counts.shape), where=support > 0)


@dataclass(frozen=True)
class ClassScores:
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray


def confusion(y_true: Sequence[int], y_pred: Sequence[int], num_classes: int = NUM_CLASSES) -> ConfusionMatrix:
    """
    Count (true, predicted) pairs

    Raises:
        ShapeError: Lengths differ or are zero
        DomainError: A label lies outside the class range
    """
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ShapeError("confusion", f"{y_true.shape} true labels vs {y_pred.shape} predictions")
    if y_true.size == 0:
        raise ShapeError("confusion", "no labels to count")
    for labels in (y_true, y_pred):
        if labels.min() < 0 or labels.max() >= num_classes:
            raise DomainError(f"labels must lie in [0, {num_classes})")
    counts = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts=counts)


def per_class_scores(cm: ConfusionMatrix) -> ClassScores:
    """
    Precision, recall and F1 per class

    Any zero denominator yields 0 for that score.
    """
    counts = cm.counts.astype(np.float64)
    tp = np.diag(counts)
    predicted = counts.sum(axis=0)
    actual = counts.sum(axis=1)
    precision = np.divide(tp, predicted, out=np.zeros_like(tp), where=predicted > 0)
    recall = np.divide(tp, actual, out=np.zeros_like(tp), where=actual > 0)
    denom = precision + recall
    f1 = np.divide(2.0 * precision * recall, denom, out=np.zeros_like(tp), where=denom > 0)
    return ClassScores(precision=precision, recall=recall, f1=f1)


def macro_f1(cm: ConfusionMatrix) -> float:
    return float(np.mean(per_class_scores(cm).f1))


def macro_f1_score(y_true: Sequence[int], y_pred: Sequence[int]) -> float:
    return macro_f1(confusion(y_true, y_pred))


def majority_baseline(train_labels: Sequence[int], test_labels: Sequence[int]) -> float:
    """Macro-F1 of always predicting the most frequent training class"""
    counts = np.bincount(np.asarray(train_labels, dtype=np.int64), minlength=NUM_CLASSES)
    majority = int(np.argmax(counts))
    test_labels = np.asarray(test_labels, dtype=np.int64)
    return macro_f1_score(test_labels, np.full(test_labels.shape, majority))
