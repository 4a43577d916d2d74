"""
Tests for confusion matrices, F1 scores and class weights
"""
from fractions import Fraction

import numpy as np
import pytest

from turnkan.metrics import (
    class_weights,
    confusion,
    macro_f1,
    macro_f1_score,
    majority_baseline,
    per_class_scores,
)
from turnkan.metrics.classification import ConfusionMatrix
from turnkan.utils.exceptions import DomainError, ShapeError

SW, ST, SP = 0, 1, 2


def test_hand_counted_confusion():
    cm = confusion([SW, SW, ST, SP], [SW, ST, ST, SW])
    np.testing.assert_array_equal(cm.counts, [[1, 1, 0], [0, 1, 0], [1, 0, 0]])
    np.testing.assert_array_equal(cm.support, [2, 1, 1])
    assert cm.total == 4


def test_perfect_predictions():
    labels = [SW, ST, SP, SP, SW]
    cm = confusion(labels, labels)
    assert np.count_nonzero(cm.counts - np.diag(np.diag(cm.counts))) == 0
    assert macro_f1(cm) == 1.0


def test_all_straight_predictions_fill_one_column():
    cm = confusion([SW, ST, SP, ST], [SW] * 4)
    assert np.all(cm.counts[:, 1:] == 0)
    scores = per_class_scores(cm)
    np.testing.assert_array_equal(scores.f1[1:], [0.0, 0.0])


def test_macro_f1_of_mostly_diagonal_matrix():
    cm = ConfusionMatrix(counts=np.array([[8, 1, 1], [2, 7, 1], [1, 1, 8]]))
    expected = (Fraction(16, 21) + Fraction(14, 19) + Fraction(16, 20)) / 3
    assert macro_f1(cm) == pytest.approx(float(expected), abs=1e-12)
    assert macro_f1(cm) == pytest.approx(0.7659, abs=1e-3)


def test_macro_is_the_mean_of_class_scores(rng):
    y_true = rng.integers(0, 3, size=200)
    y_pred = np.where(rng.uniform(size=200) < 0.7, y_true, rng.integers(0, 3, size=200))
    scores = per_class_scores(confusion(y_true, y_pred))
    assert macro_f1_score(y_true, y_pred) == pytest.approx(scores.f1.mean())
    for values in (scores.precision, scores.recall, scores.f1):
        assert np.all((values >= 0) & (values <= 1))


def test_macro_f1_is_permutation_invariant(rng):
    y_true = rng.integers(0, 3, size=100)
    y_pred = rng.integers(0, 3, size=100)
    relabel = np.array([2, 0, 1])
    assert macro_f1_score(relabel[y_true], relabel[y_pred]) == pytest.approx(macro_f1_score(y_true, y_pred))


def test_normalized_rows_sum_to_one(rng):
    cm = confusion(rng.integers(0, 2, size=50), rng.integers(0, 3, size=50))
    normalized = cm.normalized()
    np.testing.assert_allclose(normalized[:2].sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_array_equal(normalized[2], 0.0)


def test_confusion_errors():
    with pytest.raises(ShapeError):
        confusion([SW, ST], [SW])
    with pytest.raises(ShapeError):
        confusion([], [])
    with pytest.raises(DomainError):
        confusion([SW, 3], [SW, SW])


def test_majority_baseline():
    test_labels = [SW] * 70 + [ST] * 20 + [SP] * 10
    assert majority_baseline([SW, SW, ST, SP], test_labels) == pytest.approx(0.2745, abs=1e-4)


def test_class_weight_substitution():
    weights = class_weights([60, 30, 10])
    np.testing.assert_allclose(weights.values, [0.5556, 1.1111, 3.3333], atol=1e-4)
    assert weights.exact == (Fraction(5, 9), Fraction(10, 9), Fraction(10, 3))


def test_balanced_counts_give_unit_weights():
    np.testing.assert_array_equal(class_weights([40, 40, 40]).values, 1.0)


def test_weights_from_percentage_table():
    # 75.6 / 15.1 / 9.2 % per mille; the 0.1 % rounding residue goes back to SW so n = 1000
    weights = class_weights([757, 151, 92])
    assert weights.total == 1000
    np.testing.assert_allclose(weights.values, [0.4409, 2.2075, 3.6232], atol=1e-3)


def test_weighted_mass_equals_total_exactly(rng):
    for _ in range(1000):
        counts = rng.integers(1, 10_000, size=3)
        weights = class_weights(counts)
        assert weights.weighted_total() == int(counts.sum())


def test_rarer_classes_weigh_more():
    weights = class_weights([500, 120, 45]).values
    assert weights[0] < weights[1] < weights[2]


def test_zero_count_is_rejected():
    with pytest.raises(DomainError):
        class_weights([10, 0, 4])
    with pytest.raises(DomainError):
        class_weights([10, 4], num_classes=3)
