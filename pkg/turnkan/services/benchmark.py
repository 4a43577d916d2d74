"""
Single-window inference latency
"""
import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from turnkan.data.trial import WindowSet
from turnkan.models.trained import TrainedModel
from turnkan.services.base import BaseService
from turnkan.utils.exceptions import ConfigurationError, InsufficientDataError

logger = logging.getLogger(__name__)

MIN_REPETITIONS = 30
WARMUP_CALLS = 5


@dataclass(frozen=True)
class LatencyReport:
    family: str
    median_seconds: float
    repetitions: int


class BenchmarkService(BaseService):
    """Service timing model inference"""

    def benchmark_inference(
        self, model: TrainedModel, windows: WindowSet, repetitions: Optional[int] = None
    ) -> LatencyReport:
        """
        Median wall-clock time of one single-window predict

        Windows are cycled in order; a few warm-up calls are not timed.

        Raises:
            ConfigurationError: Fewer than 30 repetitions
            InsufficientDataError: No windows to time
        """
        repetitions = self.config.bench_repetitions if repetitions is None else repetitions
        if repetitions < MIN_REPETITIONS:
            raise ConfigurationError(
                f"need at least {MIN_REPETITIONS} repetitions, got {repetitions}", "bench_repetitions"
            )
        if len(windows) == 0:
            raise InsufficientDataError("no windows to benchmark")

        for i in range(WARMUP_CALLS):
            model.predict(windows.inputs[i % len(windows)])
        timings = np.empty(repetitions)
        for i in range(repetitions):
            window = windows.inputs[i % len(windows)]
            started = time.perf_counter()
            model.predict(window)
            timings[i] = time.perf_counter() - started
        median = float(np.median(timings))
        logger.info(f"{model.family} inference: median {median * 1e6:.1f} us over {repetitions} calls")
        return LatencyReport(family=model.family, median_seconds=median, repetitions=repetitions)


# Global service instance
benchmark_service = BenchmarkService()


def benchmark_inference(model: TrainedModel, windows: WindowSet, repetitions: Optional[int] = None) -> float:
    return benchmark_service.benchmark_inference(model, windows, repetitions).median_seconds
