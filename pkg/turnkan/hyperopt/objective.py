"""
Validation macro-F1 of a configuration trained on a stratified hold-out split
"""
import logging
from typing import Dict, Optional, Sequence, Tuple

from turnkan.config import settings
from turnkan.data.splits import stratified_holdout
from turnkan.data.trial import Trial, WindowSet
from turnkan.data.windowing import window_trials
from turnkan.metrics.classification import macro_f1_score
from turnkan.models.factory import build_model
from turnkan.schemas.model import ModelConfig

logger = logging.getLogger(__name__)


class ValidationObjective:
    """
    Callable objective for ``optimize``

    Training trials are windowed once per window size; the same held-out
    windows score every configuration of that size.
    """

    def __init__(
        self,
        trials: Sequence[Trial],
        seed: int,
        epochs: Optional[int] = None,
        fraction: Optional[float] = None,
    ):
        self.trials = list(trials)
        self.seed = seed
        self.epochs = epochs
        self.fraction = settings.validation_fraction if fraction is None else fraction
        self._splits: Dict[int, Tuple[WindowSet, WindowSet]] = {}

    def split(self, window_size: int) -> Tuple[WindowSet, WindowSet]:
        if window_size not in self._splits:
            windows = window_trials(self.trials, window_size)
            fit_idx, val_idx = stratified_holdout(windows, self.fraction, self.seed)
            self._splits[window_size] = (windows.subset(fit_idx), windows.subset(val_idx))
        return self._splits[window_size]

    def __call__(self, config: ModelConfig) -> float:
        # turnkan.services imports this module, so the trainer is resolved per call
        from turnkan.services.training import training_service

        fit, validation = self.split(config.window_size)
        model = build_model(config, seed=self.seed)
        training_service.train(model, fit, epochs=self.epochs)
        score = macro_f1_score(validation.labels, model.predict_labels(validation.inputs))
        logger.debug(f"{config.family.value} validation macro-F1 {score:.4f}")
        return score
