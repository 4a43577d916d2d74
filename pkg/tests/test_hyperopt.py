"""
Tests for search spaces, the GP surrogate and the optimization loop
"""
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from turnkan.hyperopt import (
    GaussianProcess,
    Real,
    SearchSpace,
    ValidationObjective,
    conv_space,
    expected_improvement,
    load_history,
    mlp_kan_space,
    optimize,
    random_search,
    suggest,
)
from turnkan.data import split_trials
from turnkan.models import preset_config
from turnkan.schemas.hyperopt import TrialRecord
from turnkan.schemas.model import ModelConfig, ModelFamily
from turnkan.utils.exceptions import ConfigurationError

SPACES = {
    "MLP": lambda: mlp_kan_space(ModelFamily.MLP),
    "KAN": lambda: mlp_kan_space(ModelFamily.KAN),
    "CNN": lambda: conv_space(ModelFamily.CNN),
    "FKAN": lambda: conv_space(ModelFamily.FKAN),
}


def quadratic_space() -> SearchSpace:
    return SearchSpace(name="quadratic", dimensions=[Real("x", 0.0, 1.0)])


def fake_history(space: SearchSpace, rng: np.random.Generator, size: int, objective=None):
    records = []
    for index in range(size):
        point = space.random_point(rng)
        score = float(rng.uniform()) if objective is None else objective
        records.append(
            TrialRecord(index=index, config={}, point=point.tolist(), objective=score, seconds=0.0, seed=0)
        )
    return records


def test_kan_grid_round_trip():
    space = mlp_kan_space(ModelFamily.KAN)
    config = ModelConfig(family=ModelFamily.KAN, hidden_widths=[40, 12], grid_size=15, spline_order=2)
    point = space.encode(config)
    assert 15.0 in point.tolist()
    assert space.decode(point) == config


def test_regularization_is_log_coded():
    space = mlp_kan_space(ModelFamily.MLP)
    point = space.encode(ModelConfig(family=ModelFamily.MLP, regularization=1e-3))
    values = dict(zip([d.name for d in space.dimensions], point))
    assert values["regularization"] == pytest.approx(-3.0)


@pytest.mark.parametrize("name", list(SPACES))
def test_sampled_configs_round_trip(rng, name):
    space = SPACES[name]()
    for _ in range(100):
        config = space.decode(space.random_point(rng))
        assert isinstance(config, ModelConfig)
        assert space.decode(space.encode(config)) == config


@pytest.mark.parametrize("name", list(SPACES))
def test_arbitrary_points_decode_to_valid_configs(rng, name):
    space = SPACES[name]()
    for _ in range(50):
        config = space.decode(rng.uniform(-5.0, 600.0, size=space.n_coords))
        assert isinstance(config, ModelConfig)


def test_space_bounds():
    kan = {d.name: d for d in mlp_kan_space(ModelFamily.KAN).dimensions}
    assert (kan["spline_order"].low, kan["spline_order"].high) == (1, 5)
    assert (kan["grid_size"].low, kan["grid_size"].high) == (1, 15)
    assert (kan["regularization"].low, kan["regularization"].high) == (1e-5, 1e-1)
    fkan = {d.name: d for d in conv_space(ModelFamily.FKAN).dimensions}
    assert fkan["conv_activation"].choices == tuple(f"fkan-{d}" for d in range(1, 7))
    assert fkan["window_size"].choices == (10, 20, 30)
    assert (fkan["dropout"].low, fkan["dropout"].high) == (0.2, 0.8)
    with pytest.raises(ConfigurationError):
        conv_space(ModelFamily.MLP)


def test_presets_are_in_their_spaces():
    for family in ModelFamily:
        config = preset_config(family)
        space = SPACES[family.value]()
        assert space.decode(space.encode(config)) == config


def test_empty_history_gives_in_bounds_point():
    space = mlp_kan_space(ModelFamily.KAN)
    point = suggest([], space, seed=0)
    assert point.shape == (space.n_coords,)
    assert isinstance(space.decode(point), ModelConfig)


def test_suggest_is_deterministic(rng):
    space = mlp_kan_space(ModelFamily.MLP)
    history = fake_history(space, rng, 12)
    np.testing.assert_array_equal(suggest(history, space, seed=3), suggest(history, space, seed=3))


def test_flat_history_falls_back_to_random(rng):
    space = mlp_kan_space(ModelFamily.KAN)
    history = fake_history(space, rng, 12, objective=0.5)
    expected = space.random_point(np.random.default_rng([7, 12]))
    np.testing.assert_array_equal(suggest(history, space, seed=7), expected)


def test_gp_interpolates_observations(rng):
    x = rng.uniform(size=(8, 2))
    y = np.sin(3 * x[:, 0]) + x[:, 1]
    mean, std = GaussianProcess().fit(x, y).predict(x)
    np.testing.assert_allclose(mean, y, atol=1e-3)
    assert np.all(std < 1e-2)


def test_expected_improvement_properties():
    ei = expected_improvement(np.array([0.5, 0.9, 0.9]), np.array([0.1, 0.1, 0.0]), best=0.8)
    assert ei[1] > ei[0]
    assert ei[2] == 0.0
    assert np.all(ei >= 0)


def test_quadratic_optimum_is_found():
    result = optimize(lambda values: 1.0 - (values["x"] - 0.3) ** 2, quadratic_space(), budget=20, seed=0)
    assert abs(result.best.config["x"] - 0.3) <= 0.05
    assert len(result.history) == 20


def test_budget_one_returns_the_single_point():
    result = optimize(lambda values: values["x"], quadratic_space(), budget=1, seed=2)
    assert len(result.history) == 1
    assert result.best == result.history[0]


def test_best_so_far_never_drops(rng):
    result = random_search(lambda values: float(np.sin(7 * values["x"]) ** 2), quadratic_space(), 15, seed=1)
    trace = result.best_so_far()
    assert all(b >= a for a, b in zip(trace, trace[1:]))
    assert trace[-1] == result.best.objective


def test_failing_objective_scores_zero():
    def explode(values):
        raise RuntimeError("boom")

    result = optimize(explode, quadratic_space(), budget=3, seed=0)
    assert [r.objective for r in result.history] == [0.0, 0.0, 0.0]
    assert all("boom" in r.error for r in result.history)


def test_zero_budget_is_rejected():
    with pytest.raises(ConfigurationError):
        optimize(lambda values: 0.5, quadratic_space(), budget=0)


def test_same_seed_same_search():
    def objective(values):
        return 1.0 - abs(values["x"] - 0.7)

    first = optimize(objective, quadratic_space(), budget=12, seed=4)
    second = optimize(objective, quadratic_space(), budget=12, seed=4)
    assert first.best == second.best.model_copy(update={"seconds": first.best.seconds})
    assert [r.point for r in first.history] == [r.point for r in second.history]


def test_history_resumes(tmp_path):
    def objective(values):
        return 1.0 - (values["x"] - 0.6) ** 2

    path = tmp_path / "history.jsonl"
    optimize(objective, quadratic_space(), budget=4, seed=5, history_path=path)
    assert len(load_history(path)) == 4
    resumed = optimize(objective, quadratic_space(), budget=12, seed=5, history_path=path)
    straight = optimize(objective, quadratic_space(), budget=12, seed=5)
    assert len(load_history(path)) == 12
    assert [r.point for r in resumed.history] == [r.point for r in straight.history]


def test_resume_with_another_seed_is_rejected(tmp_path):
    path = tmp_path / "history.jsonl"
    optimize(lambda values: values["x"], quadratic_space(), budget=2, seed=1, history_path=path)
    with pytest.raises(ConfigurationError) as exc:
        optimize(lambda values: values["x"], quadratic_space(), budget=4, seed=2, history_path=path)
    assert exc.value.field == "seed"


def test_resume_in_another_space_is_rejected(tmp_path):
    path = tmp_path / "history.jsonl"
    optimize(lambda values: values["x"], quadratic_space(), budget=2, seed=1, history_path=path)
    with pytest.raises(ConfigurationError) as exc:
        optimize(lambda config: 0.5, mlp_kan_space(ModelFamily.MLP), budget=4, seed=1, history_path=path)
    assert exc.value.field == "space"
    assert len(load_history(path)) == 2


def test_validation_objective_scores_a_config(small_trials):
    trials = [t for t in small_trials if t.subject == "S01"]
    objective = ValidationObjective(trials, seed=0, epochs=2)
    score = objective(preset_config(ModelFamily.MLP, 10))
    assert 0.0 <= score <= 1.0
    fit, validation = objective.split(10)
    assert np.all(validation.class_counts() >= 1)
    assert not set(zip(fit.trial_keys, fit.starts)) & set(zip(validation.trial_keys, validation.starts))


@pytest.mark.slow
def test_bayesian_search_beats_random_search(a01_trials):
    train_trials = split_trials(a01_trials, seed=0).train
    space = mlp_kan_space(ModelFamily.KAN)
    wins = 0
    for seed in range(10):
        objective = ValidationObjective(train_trials, seed=seed, epochs=15)
        guided = optimize(objective, space, budget=30, seed=seed).best.objective
        unguided = random_search(objective, space, budget=30, seed=seed).best.objective
        wins += guided >= unguided
    assert wins >= 7


def test_search_package_imports_on_its_own():
    code = "from turnkan.hyperopt import optimize; import turnkan.services"
    completed = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, cwd=Path(__file__).resolve().parents[1]
    )
    assert completed.returncode == 0, completed.stderr
