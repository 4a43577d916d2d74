"""
Trial-level train/test splits, stratified test divisions and validation hold-outs
"""
import hashlib
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from turnkan.data.labels import NUM_CLASSES, TURN_TYPES, Activity, Stiffness
from turnkan.data.trial import Trial, WindowSet
from turnkan.data.windowing import window_trials
from turnkan.utils.exceptions import ConfigurationError, InsufficientDataError

logger = logging.getLogger(__name__)

STRAIGHT_TEST_TRIALS = 3
NUM_DIVISIONS = 10


@dataclass
class DataSplit:
    """Disjoint train and test trials of one subject"""
    subject: str
    train: List[Trial]
    test: List[Trial]

    def train_windows(self, window_size: int) -> WindowSet:
        return window_trials(self.train, window_size)

    def test_windows(self, window_size: int) -> WindowSet:
        return window_trials(self.test, window_size)


def split_trials(trials: Sequence[Trial], seed: int) -> DataSplit:
    """
    Hold out one turning trial per (turn type, stiffness) cell plus three
    straight trials; L-test trials always train

    Raises:
        ConfigurationError: Trials from more than one subject
        InsufficientDataError: Missing cell or fewer than four straight trials
    """
    trials = list(trials)
    subjects = {t.subject for t in trials}
    if len(subjects) != 1:
        raise ConfigurationError(f"split_trials expects one subject, got {sorted(subjects)}", "subject")
    subject = subjects.pop()
    rng = np.random.default_rng(seed)

    test_keys = set()
    for turn in TURN_TYPES:
        for stiffness in Stiffness:
            cell = [t for t in trials if t.activity == turn and t.stiffness == stiffness]
            if not cell:
                raise InsufficientDataError(
                    f"subject {subject} has no trial for cell ({turn.value}, {stiffness.value})"
                )
            test_keys.add(cell[int(rng.integers(len(cell)))].key)

    straight = [t for t in trials if t.activity == Activity.STRAIGHT]
    if len(straight) < STRAIGHT_TEST_TRIALS + 1:
        raise InsufficientDataError(
            f"subject {subject} has {len(straight)} straight trials, need at least {STRAIGHT_TEST_TRIALS + 1}"
        )
    for i in sorted(rng.choice(len(straight), STRAIGHT_TEST_TRIALS, replace=False)):
        test_keys.add(straight[int(i)].key)

    train = [t for t in trials if t.key not in test_keys]
    test = [t for t in trials if t.key in test_keys]
    logger.debug(f"Split {subject}: {len(train)} train / {len(test)} test trials (seed {seed})")
    return DataSplit(subject=subject, train=train, test=test)


@dataclass
class Divisions:
    """Ten disjoint stratified folds over one test window set"""
    folds: List[np.ndarray]
    assignment: np.ndarray
    checksum: str

    def __len__(self) -> int:
        return len(self.folds)


def fold_checksum(windows: WindowSet, assignment: np.ndarray) -> str:
    """SHA-256 over (trial key, start, fold) of every window"""
    digest = hashlib.sha256()
    for key, start, fold in zip(windows.trial_keys, windows.starts, assignment):
        digest.update(f"{key},{int(start)},{int(fold)}\n".encode("utf-8"))
    return digest.hexdigest()


def ten_divisions(windows: WindowSet, seed: int, n_divisions: int = NUM_DIVISIONS) -> Divisions:
    """
    Partition test windows into disjoint folds, stratified per class

    Each class is shuffled and dealt round-robin; the dealing offset carries
    over between classes so fold sizes differ by at most one overall.

    Raises:
        InsufficientDataError: A class has fewer windows than folds
    """
    counts = windows.class_counts()
    for c in range(NUM_CLASSES):
        if counts[c] < n_divisions:
            raise InsufficientDataError(
                f"class {c} has {counts[c]} test windows, need at least {n_divisions}"
            )
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(windows), dtype=np.int64)
    offset = 0
    for c in range(NUM_CLASSES):
        members = rng.permutation(np.flatnonzero(windows.labels == c))
        assignment[members] = (np.arange(members.size) + offset) % n_divisions
        offset = (offset + members.size) % n_divisions
    folds = [np.flatnonzero(assignment == f) for f in range(n_divisions)]
    return Divisions(folds=folds, assignment=assignment, checksum=fold_checksum(windows, assignment))


def stratified_holdout(
    windows: WindowSet, fraction: float, seed: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split window indices into (fit, validation), holding out ``fraction`` of
    every class (at least one window of each class with two or more members)
    """
    if not 0.0 < fraction < 1.0:
        raise ConfigurationError(f"fraction must lie in (0, 1), got {fraction}", "validation_fraction")
    rng = np.random.default_rng(seed)
    held: List[np.ndarray] = []
    kept: List[np.ndarray] = []
    for c in range(NUM_CLASSES):
        members = rng.permutation(np.flatnonzero(windows.labels == c))
        n_val = int(round(fraction * members.size))
        if members.size >= 2:
            n_val = min(max(n_val, 1), members.size - 1)
        else:
            n_val = 0
        held.append(members[:n_val])
        kept.append(members[n_val:])
    return np.sort(np.concatenate(kept)), np.sort(np.concatenate(held))
