"""
Signal smoothing and per-channel standardization
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from turnkan.data.labels import NUM_CHANNELS
from turnkan.data.trial import Trial, WindowSet
from turnkan.utils.exceptions import DomainError, InsufficientDataError

logger = logging.getLogger(__name__)

SMOOTHING_WIDTH = 7


def moving_average(signal: np.ndarray, width: int = SMOOTHING_WIDTH) -> np.ndarray:
    """
    Centered moving average along the first axis

    Near the edges the window shrinks symmetrically, so sample i averages
    the 2*min(half, i, n-1-i)+1 samples centred on it.

    Args:
        signal: (samples,) or (samples, channels) array
        width: Odd window length

    Returns:
        Smoothed array of the same shape
    """
    if width < 1 or width % 2 == 0:
        raise DomainError(f"moving-average width must be a positive odd number, got {width}")
    x = np.asarray(signal, dtype=np.float64)
    n = x.shape[0]
    if n < width:
        raise InsufficientDataError(f"series of {n} samples is shorter than the {width}-point filter")

    half = width // 2
    idx = np.arange(n)
    reach = np.minimum(half, np.minimum(idx, n - 1 - idx))
    cumsum = np.concatenate([np.zeros((1,) + x.shape[1:]), np.cumsum(x, axis=0)])
    lo = idx - reach
    hi = idx + reach + 1
    counts = (hi - lo).reshape((-1,) + (1,) * (x.ndim - 1))
    return (cumsum[hi] - cumsum[lo]) / counts


def smooth_trials(trials: Sequence[Trial], width: int = SMOOTHING_WIDTH) -> List[Trial]:
    return [trial.with_signals(moving_average(trial.signals, width)) for trial in trials]


@dataclass
class Standardizer:
    """Per-channel zero-mean, unit-variance scaling fitted on training windows"""
    mean: np.ndarray
    scale: np.ndarray

    @staticmethod
    def identity() -> "Standardizer":
        return Standardizer(mean=np.zeros(NUM_CHANNELS), scale=np.ones(NUM_CHANNELS))

    @staticmethod
    def fit(windows: WindowSet) -> "Standardizer":
        if len(windows) == 0:
            raise InsufficientDataError("cannot fit standardization on an empty window set")
        flat = windows.inputs.reshape(-1, windows.inputs.shape[-1])
        mean = flat.mean(axis=0)
        scale = flat.std(axis=0)
        scale = np.where(scale > 1e-12, scale, 1.0)
        logger.debug(f"Standardizer fitted on {len(windows)} windows")
        return Standardizer(mean=mean, scale=scale)

    def transform(self, inputs: np.ndarray) -> np.ndarray:
        return (np.asarray(inputs, dtype=np.float64) - self.mean) / self.scale
