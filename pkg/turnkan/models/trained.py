"""
A network bundled with its config, input scaling and training record
"""
import logging
from typing import List, Optional, Union

import numpy as np

from turnkan.data.labels import LABEL_ORDER, NUM_CHANNELS, GaitLabel
from turnkan.data.preprocessing import Standardizer
from turnkan.data.trial import Window
from turnkan.models.networks import Network
from turnkan.numcore import Parameter, Tensor
from turnkan.numcore.functional import softmax
from turnkan.schemas.model import ModelConfig
from turnkan.utils.exceptions import ShapeError

logger = logging.getLogger(__name__)

WindowInput = Union[Window, np.ndarray]


class TrainedModel:
    """
    Classifier over (SW, ST, SP)

    Inputs are raw windows; the stored Standardizer is applied before the
    network. Prediction never enables dropout.
    """

    label_order = LABEL_ORDER

    def __init__(
        self,
        config: ModelConfig,
        network: Network,
        seed: int,
        standardizer: Optional[Standardizer] = None,
    ):
        self.config = config
        self.network = network
        self.seed = seed
        self.standardizer = standardizer or Standardizer.identity()
        self.history: List[float] = []
        self.train_seconds = 0.0

    @property
    def family(self) -> str:
        return self.config.family.value

    def parameters(self) -> List[Parameter]:
        return self.network.parameters()

    def num_parameters(self) -> int:
        return self.network.num_parameters()

    def parameter_vector(self) -> np.ndarray:
        return np.concatenate([p.data.ravel() for p in self.parameters()])

    def load_parameter_vector(self, vector: np.ndarray) -> None:
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (self.num_parameters(),):
            raise ShapeError("load_parameters", f"{vector.shape} values for {self.num_parameters()} parameters")
        offset = 0
        for p in self.parameters():
            p.assign(vector[offset:offset + p.size].reshape(p.shape))
            offset += p.size

    def _batch(self, inputs: WindowInput) -> np.ndarray:
        if isinstance(inputs, Window):
            inputs = inputs.data
        batch = np.asarray(inputs, dtype=np.float64)
        if batch.ndim == 2:
            batch = batch[None]
        expected = (self.config.window_size, NUM_CHANNELS)
        if batch.ndim != 3 or batch.shape[1:] != expected:
            raise ShapeError("predict", f"expected windows of shape {expected}, got {np.shape(inputs)}")
        return batch

    def logits(self, inputs: WindowInput, training: bool = False) -> Tensor:
        batch = self.standardizer.transform(self._batch(inputs))
        self.network.train(training)
        try:
            return self.network(Tensor(batch))
        finally:
            if training:
                self.network.eval()

    def predict_proba(self, inputs: WindowInput) -> np.ndarray:
        """Class probabilities of shape (batch, 3)"""
        return softmax(self.logits(inputs).data)

    def predict(self, window: WindowInput) -> np.ndarray:
        """Probability 3-vector for one window"""
        probabilities = self.predict_proba(window)
        if probabilities.shape[0] != 1:
            raise ShapeError("predict", f"expected a single window, got {probabilities.shape[0]}")
        return probabilities[0]

    def predict_labels(self, inputs: WindowInput) -> np.ndarray:
        return np.argmax(self.predict_proba(inputs), axis=1)

    def predict_label(self, window: WindowInput) -> GaitLabel:
        return LABEL_ORDER[int(np.argmax(self.predict(window)))]
