"""
Full-batch training with class-weighted cross-entropy
"""
import logging
import time
from typing import Optional

import numpy as np

from turnkan.data.labels import NUM_CLASSES, label_name
from turnkan.data.preprocessing import Standardizer
from turnkan.data.trial import WindowSet
from turnkan.metrics.weights import ClassWeights, class_weights
from turnkan.models.trained import TrainedModel
from turnkan.numcore import Adam, Tensor
from turnkan.numcore.functional import weighted_cross_entropy
from turnkan.schemas.model import ModelFamily
from turnkan.services.base import BaseService
from turnkan.utils.exceptions import InsufficientDataError, NumericalError

logger = logging.getLogger(__name__)


class TrainingService(BaseService):
    """Service fitting models on window sets"""

    def learning_rate(self, model: TrainedModel) -> float:
        """Configured rate for CNN/FKAN, the fixed shared rate for MLP/KAN"""
        if model.config.family.is_convolutional:
            return model.config.learning_rate
        return self.config.mlp_kan_learning_rate

    @staticmethod
    def loss(model: TrainedModel, inputs: np.ndarray, labels: np.ndarray, weights: ClassWeights) -> Tensor:
        """
        Weighted cross-entropy plus the family's regularization term

        Args:
            model: Model in training mode
            inputs: Standardized (batch, W, 6) windows
            labels: Class indices
            weights: Per-class weights

        Returns:
            Scalar loss tensor
        """
        logits = model.network(Tensor(inputs))
        loss = weighted_cross_entropy(logits, labels, weights.values)
        if model.config.family in (ModelFamily.MLP, ModelFamily.KAN):
            loss = loss + model.network.penalty()
        return loss

    def train(
        self,
        model: TrainedModel,
        windows: WindowSet,
        weights: Optional[ClassWeights] = None,
        epochs: Optional[int] = None,
        lr: Optional[float] = None,
        standardize: bool = True,
    ) -> TrainedModel:
        """
        Train in place with Adam on the whole window set every epoch

        Args:
            model: Freshly built model
            windows: Training windows, all three classes present
            weights: Class weights, computed from the window counts when omitted
            epochs: Number of full-batch updates (settings.epochs by default)
            lr: Learning rate override
            standardize: Fit per-channel scaling on these windows

        Returns:
            The same model, trained, with one history entry per epoch

        Raises:
            InsufficientDataError: A class has no training window
            NumericalError: Non-finite loss or gradient, with the epoch index
        """
        counts = windows.class_counts()
        missing = [label_name(c) for c in range(NUM_CLASSES) if counts[c] == 0]
        if missing:
            raise InsufficientDataError(f"no training windows for class {', '.join(missing)}")
        weights = weights or class_weights(counts)
        epochs = self.config.epochs if epochs is None else epochs
        lr = self.learning_rate(model) if lr is None else lr

        model.standardizer = Standardizer.fit(windows) if standardize else Standardizer.identity()
        inputs = model.standardizer.transform(windows.inputs)
        optimizer = Adam(
            model.parameters(),
            lr=lr,
            beta1=self.config.adam_beta1,
            beta2=self.config.adam_beta2,
            eps_hat=self.config.adam_eps,
        )

        history = []
        started = time.perf_counter()
        model.network.train()
        try:
            for epoch in range(epochs):
                optimizer.zero_grad()
                loss = self.loss(model, inputs, windows.labels, weights)
                value = loss.item()
                if not np.isfinite(value):
                    raise NumericalError(f"non-finite training loss for {model.family}", epoch=epoch)
                loss.backward()
                try:
                    optimizer.step()
                except NumericalError as e:
                    raise NumericalError(e.message, epoch=epoch) from None
                history.append(value)
                logger.debug(f"{model.family} epoch {epoch}: loss {value:.6f}")
        finally:
            model.network.eval()

        model.history = history
        model.train_seconds = time.perf_counter() - started
        if history:
            logger.info(
                f"Trained {model.family} on {len(windows)} windows: loss {history[0]:.4f} -> "
                f"{history[-1]:.4f} in {model.train_seconds:.2f}s"
            )
        return model


# Global service instance
training_service = TrainingService()


def train(
    model: TrainedModel,
    windows: WindowSet,
    weights: Optional[ClassWeights] = None,
    epochs: Optional[int] = None,
    lr: Optional[float] = None,
) -> TrainedModel:
    return training_service.train(model, windows, weights=weights, epochs=epochs, lr=lr)
