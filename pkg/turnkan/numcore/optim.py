"""
Adam optimizer
"""
import logging
from typing import Iterable, List

import numpy as np

from turnkan.numcore.tensor import Parameter
from turnkan.utils.exceptions import ConfigurationError, NumericalError

logger = logging.getLogger(__name__)


class Adam:
    """
    Adam with bias correction

    Moment estimates live on the optimizer and persist across ``step`` calls,
    so one instance must be kept for the whole training run.
    """

    def __init__(
        self,
        parameters: Iterable[Parameter],
        lr: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps_hat: float = 1e-8,
    ):
        if lr < 0:
            raise ConfigurationError("learning rate must be non-negative", "learning_rate")
        self.parameters: List[Parameter] = [p for p in parameters if p.requires_grad]
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps_hat = eps_hat
        self.t = 0
        self._m = [np.zeros_like(p.data) for p in self.parameters]
        self._v = [np.zeros_like(p.data) for p in self.parameters]

    def zero_grad(self) -> None:
        for p in self.parameters:
            p.zero_grad()

    def step(self) -> None:
        """
        Apply one update from the gradients currently stored on the parameters

        Raises:
            NumericalError: If any gradient is not finite
        """
        for p in self.parameters:
            if not np.all(np.isfinite(p.grad)):
                raise NumericalError(f"non-finite gradient for parameter '{p.name}'")

        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t
        for i, p in enumerate(self.parameters):
            g = p.grad
            self._m[i] = self.beta1 * self._m[i] + (1.0 - self.beta1) * g
            self._v[i] = self.beta2 * self._v[i] + (1.0 - self.beta2) * g * g
            m_hat = self._m[i] / correction1
            v_hat = self._v[i] / correction2
            p.data = p.data - self.lr * m_hat / (np.sqrt(v_hat) + self.eps_hat)


def adam_step(optimizer: Adam) -> None:
    """Functional spelling of ``Adam.step``"""
    optimizer.step()
