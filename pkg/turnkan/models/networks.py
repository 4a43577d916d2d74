"""
The four classifier topologies
"""
from typing import List

import numpy as np

from turnkan.basis import BSplineGrid, JacobiParams
from turnkan.data.labels import NUM_CHANNELS, NUM_CLASSES
from turnkan.models.layers import (
    Activation,
    Conv1d,
    Dense,
    Dropout,
    FKANActivation,
    KANLayer,
    MaxPool1d,
    Module,
    Sequential,
)
from turnkan.numcore import Parameter, Tensor
from turnkan.schemas.model import ModelConfig, ModelFamily


class Network(Module):
    """Maps a (batch, W, 6) window batch to (batch, 3) logits"""

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config

    def penalty(self) -> Tensor:
        """Regularization term added to the training loss"""
        return Tensor(0.0)


class MLPNetwork(Network):
    """Dense layers with fixed node activations over the flattened window"""

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__(config)
        widths = [config.window_size * NUM_CHANNELS] + list(config.hidden_widths)
        self.body = Sequential()
        for i, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
            self.body.append(Dense(fan_in, fan_out, rng, name=f"hidden{i}"))
            self.body.append(Activation(config.activation))
        self.head = Dense(widths[-1], NUM_CLASSES, rng, name="output")

    def forward(self, x: Tensor) -> Tensor:
        x = x.reshape(x.shape[0], -1)
        return self.head(self.body(x))

    def weight_matrices(self) -> List[Parameter]:
        return [p for p in self.parameters() if p.name.endswith(".weight")]

    def penalty(self) -> Tensor:
        total = Tensor(0.0)
        for weight in self.weight_matrices():
            total = total + (weight * weight).sum()
        return total * self.config.regularization


class KANNetwork(Network):
    """Stacked KAN layers from the flattened window to the three class logits"""

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__(config)
        grid = BSplineGrid(grid_size=config.grid_size, order=config.spline_order)
        widths = [config.window_size * NUM_CHANNELS] + list(config.hidden_widths) + [NUM_CLASSES]
        self.layers: List[KANLayer] = [
            KANLayer(fan_in, fan_out, grid, rng, name=f"kan{i}")
            for i, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:]))
        ]

    def forward(self, x: Tensor) -> Tensor:
        x = x.reshape(x.shape[0], -1)
        for layer in self.layers:
            x = layer(x)
        return x

    def penalty(self) -> Tensor:
        total = Tensor(0.0)
        for layer in self.layers:
            total = total + layer.l1_penalty()
        return total * self.config.regularization


class ConvNetwork(Network):
    """
    Conv -> activation -> max-pool blocks, then flatten or global average
    pooling, dropout and a dense classifier

    CNN uses relu/tanh after each convolution; FKAN uses a fractional-Jacobi
    activation with its own coefficients per block.
    """

    def __init__(self, config: ModelConfig, rng: np.random.Generator):
        super().__init__(config)
        self.features = Sequential()
        channels = NUM_CHANNELS
        degree = config.fkan_degree
        blocks = zip(config.conv_filters, config.conv_kernels, config.conv_pools)
        for i, (filters, kernel, pool) in enumerate(blocks):
            self.features.append(Conv1d(channels, filters, kernel, config.padding, rng, name=f"conv{i}"))
            if degree is None:
                self.features.append(Activation(config.conv_activation))
            else:
                self.features.append(FKANActivation(filters, JacobiParams(degree=degree), rng, name=f"fkan{i}"))
            self.features.append(MaxPool1d(pool))
            channels = filters

        width = channels if config.global_average_pooling else channels * config.feature_length
        self.classifier = Sequential()
        for i, units in enumerate(config.dense_widths):
            self.classifier.append(Dropout(config.dropout, rng))
            self.classifier.append(Dense(width, units, rng, name=f"dense{i}"))
            self.classifier.append(Activation(config.dense_activation))
            width = units
        self.classifier.append(Dropout(config.dropout, rng))
        self.classifier.append(Dense(width, NUM_CLASSES, rng, name="output"))

    def forward(self, x: Tensor) -> Tensor:
        # (batch, W, channels) -> (batch, channels, W)
        x = self.features(x.transpose(0, 2, 1))
        if self.config.global_average_pooling:
            x = x.mean(axis=2)
        else:
            x = x.reshape(x.shape[0], -1)
        return self.classifier(x)


def network_for(config: ModelConfig, rng: np.random.Generator) -> Network:
    if config.family == ModelFamily.MLP:
        return MLPNetwork(config, rng)
    if config.family == ModelFamily.KAN:
        return KANNetwork(config, rng)
    return ConvNetwork(config, rng)


def expected_parameter_count(config: ModelConfig) -> int:
    """Parameter count implied by a config, independent of any built network"""
    flat = config.window_size * NUM_CHANNELS
    if config.family == ModelFamily.MLP:
        widths = [flat] + list(config.hidden_widths) + [NUM_CLASSES]
        return sum(a * b + b for a, b in zip(widths[:-1], widths[1:]))
    if config.family == ModelFamily.KAN:
        widths = [flat] + list(config.hidden_widths) + [NUM_CLASSES]
        per_edge = config.grid_size + config.spline_order + 2
        return sum(a * b for a, b in zip(widths[:-1], widths[1:])) * per_edge

    total = 0
    channels = NUM_CHANNELS
    degree = config.fkan_degree
    for filters, kernel in zip(config.conv_filters, config.conv_kernels):
        total += filters * channels * kernel + filters
        if degree is not None:
            total += 1 + filters * (degree + 1)
        channels = filters
    width = channels if config.global_average_pooling else channels * config.feature_length
    for units in list(config.dense_widths) + [NUM_CLASSES]:
        total += width * units + units
        width = units
    return total
