"""
Tests for the training loop and the inference benchmark
"""
import numpy as np
import pytest

from turnkan.config import settings
from turnkan.data.trial import WindowSet
from turnkan.metrics.weights import class_weights
from turnkan.models import build_model, preset_config
from turnkan.numcore import Tensor
from turnkan.numcore.functional import weighted_cross_entropy
from turnkan.schemas.model import ModelConfig, ModelFamily
from turnkan.services.benchmark import benchmark_inference, benchmark_service
from turnkan.services.training import train, training_service
from turnkan.utils.exceptions import ConfigurationError, InsufficientDataError, NumericalError


def separable_windows(rng: np.random.Generator, per_class: int = 20, window_size: int = 10) -> WindowSet:
    """Three classes whose windows differ by a constant offset"""
    labels = np.repeat(np.arange(3), per_class)
    inputs = rng.normal(scale=0.5, size=(labels.size, window_size, 6)) + 2.0 * labels[:, None, None]
    return WindowSet(
        inputs=inputs,
        labels=labels,
        trial_keys=np.array([f"toy/{i}" for i in range(labels.size)], dtype=object),
        starts=np.zeros(labels.size, dtype=np.int64),
    )


@pytest.mark.parametrize("family", [ModelFamily.MLP, ModelFamily.KAN])
def test_loss_drops_on_separable_data(rng, family):
    windows = separable_windows(rng)
    config = ModelConfig(family=family, window_size=10, hidden_widths=[20], grid_size=5, spline_order=3)
    model = train(build_model(config, seed=0), windows, epochs=100, lr=1e-2)
    assert len(model.history) == 100
    assert model.history[-1] < 0.1 * model.history[0]
    assert np.mean(model.predict_labels(windows.inputs) == windows.labels) == 1.0


def test_zero_learning_rate_changes_nothing(rng):
    windows = separable_windows(rng)
    model = build_model(preset_config(ModelFamily.MLP, 10), seed=0)
    before = model.parameter_vector()
    train(model, windows, epochs=5, lr=0.0)
    np.testing.assert_array_equal(model.parameter_vector(), before)
    assert len(set(model.history)) == 1


@pytest.mark.parametrize("family", list(ModelFamily))
def test_training_is_deterministic(rng, family):
    windows = separable_windows(rng, per_class=6)
    first = train(build_model(preset_config(family, 10), seed=4), windows, epochs=3)
    second = train(build_model(preset_config(family, 10), seed=4), windows, epochs=3)
    np.testing.assert_array_equal(first.parameter_vector(), second.parameter_vector())
    assert first.history == second.history
    assert not first.network.training


def test_missing_class_is_rejected(rng):
    windows = separable_windows(rng)
    two_classes = windows.subset(np.flatnonzero(windows.labels != 2))
    with pytest.raises(InsufficientDataError) as exc:
        train(build_model(preset_config(ModelFamily.MLP, 10), seed=0), two_classes, epochs=1)
    assert "SP" in exc.value.message


def test_divergence_reports_the_epoch(rng):
    windows = separable_windows(rng)
    model = build_model(preset_config(ModelFamily.MLP, 10), seed=0)
    with pytest.raises(NumericalError) as exc:
        train(model, windows, epochs=10, lr=1e300)
    assert exc.value.epoch is not None
    assert not model.network.training


def test_mlp_and_kan_use_the_shared_learning_rate(monkeypatch):
    monkeypatch.setattr(settings, "mlp_kan_learning_rate", 5e-4)
    assert training_service.learning_rate(build_model(preset_config(ModelFamily.KAN, 10), seed=0)) == 5e-4
    cnn = build_model(preset_config(ModelFamily.CNN, 10), seed=0)
    assert training_service.learning_rate(cnn) == cnn.config.learning_rate


def test_standardizer_is_fitted_on_training_windows(rng):
    windows = separable_windows(rng)
    model = train(build_model(preset_config(ModelFamily.MLP, 10), seed=0), windows, epochs=1)
    flat = windows.inputs.reshape(-1, 6)
    np.testing.assert_allclose(model.standardizer.mean, flat.mean(axis=0))
    np.testing.assert_allclose(model.standardizer.scale, flat.std(axis=0))


def test_kan_loss_includes_spline_penalty(rng):
    windows = separable_windows(rng, per_class=4)
    model = build_model(preset_config(ModelFamily.KAN, 10), seed=0)
    weights = class_weights([4, 4, 4])
    cross_entropy = weighted_cross_entropy(model.network(Tensor(windows.inputs)), windows.labels, weights.values)
    penalty = model.network.penalty().item()
    assert penalty > 0
    loss = training_service.loss(model, windows.inputs, windows.labels, weights).item()
    assert loss == pytest.approx(cross_entropy.item() + penalty, rel=1e-12)


def test_benchmark_reports_positive_latency(rng):
    windows = separable_windows(rng, per_class=2, window_size=20)
    model = build_model(preset_config(ModelFamily.MLP, 20), seed=0)
    report = benchmark_service.benchmark_inference(model, windows, repetitions=30)
    assert report.median_seconds > 0
    assert report.repetitions == 30
    assert report.family == "MLP"


def test_benchmark_needs_thirty_repetitions(rng):
    windows = separable_windows(rng, per_class=2, window_size=20)
    model = build_model(preset_config(ModelFamily.MLP, 20), seed=0)
    with pytest.raises(ConfigurationError):
        benchmark_inference(model, windows, repetitions=29)
    with pytest.raises(InsufficientDataError):
        benchmark_inference(model, WindowSet.empty(20), repetitions=30)


@pytest.mark.slow
def test_kan_inference_is_slower_than_mlp(rng):
    windows = separable_windows(rng, per_class=4, window_size=20)
    mlp = benchmark_inference(build_model(preset_config(ModelFamily.MLP, 20), seed=0), windows, 200)
    kan = benchmark_inference(build_model(preset_config(ModelFamily.KAN, 20), seed=0), windows, 200)
    assert kan > mlp


@pytest.mark.slow
def test_benchmark_is_stable(rng):
    windows = separable_windows(rng, per_class=4, window_size=20)
    model = build_model(preset_config(ModelFamily.CNN, 20), seed=0)
    first = benchmark_inference(model, windows, 200)
    second = benchmark_inference(model, windows, 200)
    assert first / 3 <= second <= first * 3
