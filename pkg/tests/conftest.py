"""
Shared fixtures: seeded generators, synthetic subjects and a small CSV dataset
"""
from pathlib import Path
from typing import List

import numpy as np
import pytest

from turnkan.data.csvio import export_csv
from turnkan.data.synth import default_profiles, synth_subject
from turnkan.data.trial import Trial
from turnkan.schemas.profile import SubjectProfile


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def a01_profile() -> SubjectProfile:
    return default_profiles()[0]


@pytest.fixture(scope="session")
def a01_trials(a01_profile: SubjectProfile) -> List[Trial]:
    return synth_subject(a01_profile, seed=0)


def small_profile(subject_id: str, base: SubjectProfile) -> SubjectProfile:
    """Fewest trials that still leave every class in both split sides"""
    return base.model_copy(
        update={"subject_id": subject_id, "trials_per_cell": 2, "straight_trials": 5, "ltest_trials": 1}
    )


@pytest.fixture(scope="session")
def small_trials() -> List[Trial]:
    profiles = default_profiles()
    trials: List[Trial] = []
    for offset, (subject, base) in enumerate(zip(("S01", "S02"), profiles)):
        trials.extend(synth_subject(small_profile(subject, base), seed=offset))
    return trials


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory: pytest.TempPathFactory, small_trials: List[Trial]) -> Path:
    """Two-subject CSV for quick end-to-end runs"""
    return export_csv(small_trials, tmp_path_factory.mktemp("data") / "small.csv")
