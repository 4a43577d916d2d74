"""
Trial and window containers
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Sequence

import numpy as np

from turnkan.data.labels import LABEL_INDEX, LABEL_ORDER, NUM_CHANNELS, NUM_CLASSES, Activity, Stiffness
from turnkan.utils.exceptions import DataFormatError, ShapeError

_SW, _ST, _SP = LABEL_INDEX["SW"], LABEL_INDEX["ST"], LABEL_INDEX["SP"]
_ALLOWED_TRANSITIONS = {
    _SW: {_SW, _SP},
    _SP: {_SP, _ST},
    _ST: {_ST, _SW},
}


@dataclass
class Trial:
    """One recorded walking bout"""
    subject: str
    activity: Activity
    stiffness: Stiffness
    trial: int
    signals: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        self.signals = np.asarray(self.signals, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.signals.ndim != 2 or self.signals.shape[1] != NUM_CHANNELS:
            raise ShapeError("trial", f"signals must be (samples, {NUM_CHANNELS}), got {self.signals.shape}")
        if self.labels.shape != (self.signals.shape[0],):
            raise ShapeError("trial", f"{self.labels.shape} labels for {self.signals.shape[0]} samples")

    @property
    def key(self) -> str:
        return f"{self.subject}/{self.activity.value}/{self.stiffness.value}/{self.trial}"

    @property
    def n_samples(self) -> int:
        return int(self.signals.shape[0])

    @property
    def is_turning(self) -> bool:
        return self.activity != Activity.STRAIGHT

    def with_signals(self, signals: np.ndarray) -> "Trial":
        return replace(self, signals=signals)


def validate_label_grammar(trial: Trial) -> None:
    """
    Check the label sequence against SW -> SP -> ST -> SW

    Straight trials may only hold SW; turning trials need at least one SP
    segment directly followed by ST.

    Raises:
        DataFormatError: Naming the trial and the first offending sample
    """
    labels = trial.labels
    if labels.size == 0:
        raise DataFormatError(f"trial {trial.key} has no samples")
    if not trial.is_turning:
        bad = np.flatnonzero(labels != _SW)
        if bad.size:
            raise DataFormatError(f"straight trial {trial.key} has a non-SW label at sample {bad[0]}")
        return

    turn_seen = False
    for i in range(1, labels.size):
        prev, cur = int(labels[i - 1]), int(labels[i])
        if cur not in _ALLOWED_TRANSITIONS[prev]:
            raise DataFormatError(
                f"trial {trial.key}: illegal transition {LABEL_ORDER[prev].value}->"
                f"{LABEL_ORDER[cur].value} at sample {i}"
            )
        if prev == _SP and cur == _ST:
            turn_seen = True
    if not turn_seen:
        raise DataFormatError(f"turning trial {trial.key} has no SP segment followed by ST")


@dataclass(frozen=True)
class Window:
    """Fixed-length 6-channel segment labeled by its final sample"""
    data: np.ndarray
    label: int
    trial_key: str
    start: int


@dataclass
class WindowSet:
    """Column-wise batch of windows sharing one window size"""
    inputs: np.ndarray
    labels: np.ndarray
    trial_keys: np.ndarray
    starts: np.ndarray
    window_size: int = field(default=0)

    def __post_init__(self) -> None:
        self.inputs = np.asarray(self.inputs, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.trial_keys = np.asarray(self.trial_keys, dtype=object)
        self.starts = np.asarray(self.starts, dtype=np.int64)
        if self.inputs.ndim == 3 and not self.window_size:
            self.window_size = int(self.inputs.shape[1])

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=NUM_CLASSES)

    def proportions(self) -> np.ndarray:
        counts = self.class_counts()
        total = counts.sum()
        return counts / total if total else counts.astype(np.float64)

    def subset(self, indices: Sequence[int]) -> "WindowSet":
        indices = np.asarray(indices, dtype=np.int64)
        return WindowSet(
            inputs=self.inputs[indices],
            labels=self.labels[indices],
            trial_keys=self.trial_keys[indices],
            starts=self.starts[indices],
            window_size=self.window_size,
        )

    def windows(self) -> List[Window]:
        return [
            Window(data=self.inputs[i], label=int(self.labels[i]),
                   trial_key=str(self.trial_keys[i]), start=int(self.starts[i]))
            for i in range(len(self))
        ]

    @staticmethod
    def empty(window_size: int) -> "WindowSet":
        return WindowSet(
            inputs=np.zeros((0, window_size, NUM_CHANNELS)),
            labels=np.zeros(0, dtype=np.int64),
            trial_keys=np.zeros(0, dtype=object),
            starts=np.zeros(0, dtype=np.int64),
            window_size=window_size,
        )

    @staticmethod
    def concat(sets: Sequence["WindowSet"], window_size: int) -> "WindowSet":
        sets = [s for s in sets if len(s)]
        if not sets:
            return WindowSet.empty(window_size)
        return WindowSet(
            inputs=np.concatenate([s.inputs for s in sets]),
            labels=np.concatenate([s.labels for s in sets]),
            trial_keys=np.concatenate([s.trial_keys for s in sets]),
            starts=np.concatenate([s.starts for s in sets]),
            window_size=window_size,
        )


def group_by_subject(trials: Sequence[Trial]) -> Dict[str, List[Trial]]:
    """Trials per subject, subjects in first-appearance order"""
    grouped: Dict[str, List[Trial]] = {}
    for trial in trials:
        grouped.setdefault(trial.subject, []).append(trial)
    return grouped
