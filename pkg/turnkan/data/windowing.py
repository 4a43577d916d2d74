"""
Overlapping sliding-window segmentation
"""
from typing import List, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from turnkan.data.labels import MAX_PREDICTION_SAMPLES, SAMPLE_RATE_HZ, WINDOW_SIZES
from turnkan.data.trial import Trial, Window, WindowSet
from turnkan.utils.exceptions import ConfigurationError


def check_window_size(window_size: int) -> None:
    if window_size not in WINDOW_SIZES:
        raise ConfigurationError(
            f"window size must be one of {WINDOW_SIZES}, got {window_size}", "window_size"
        )


def window_stride(window_size: int) -> int:
    """
    Samples between consecutive window ends, half the window

    Raises:
        ConfigurationError: The stride exceeds the controller's decision budget
    """
    check_window_size(window_size)
    stride = window_size // 2
    if stride > MAX_PREDICTION_SAMPLES:
        budget_ms = 1000 * MAX_PREDICTION_SAMPLES / SAMPLE_RATE_HZ
        raise ConfigurationError(
            f"stride {stride} exceeds {MAX_PREDICTION_SAMPLES} samples ({budget_ms:.0f} ms)", "window_size"
        )
    return stride


def window_trial(trial: Trial, window_size: int) -> WindowSet:
    """
    Cut one trial into windows with stride window_size/2

    Each window takes the label of its final sample. A trial shorter than the
    window yields no windows.
    """
    stride = window_stride(window_size)
    if trial.n_samples < window_size:
        return WindowSet.empty(window_size)
    # (n_windows, channels, W) -> (n_windows, W, channels)
    views = sliding_window_view(trial.signals, window_size, axis=0)[::stride]
    inputs = np.ascontiguousarray(views.transpose(0, 2, 1))
    starts = np.arange(inputs.shape[0]) * stride
    labels = trial.labels[starts + window_size - 1]
    return WindowSet(
        inputs=inputs,
        labels=labels,
        trial_keys=np.full(inputs.shape[0], trial.key, dtype=object),
        starts=starts,
        window_size=window_size,
    )


def make_windows(trial: Trial, window_size: int) -> List[Window]:
    return window_trial(trial, window_size).windows()


def window_trials(trials: Sequence[Trial], window_size: int) -> WindowSet:
    """Windows of every trial, concatenated in trial order"""
    check_window_size(window_size)
    return WindowSet.concat([window_trial(t, window_size) for t in trials], window_size)
