"""
Differentiable building blocks shared by all classifier families
"""
from typing import Iterator, List, Optional

import numpy as np

from turnkan.basis import BSplineGrid, JacobiParams, bspline_basis, fractional_transform, jacobi_eval
from turnkan.basis.activations import static_activation
from turnkan.numcore import Parameter, Tensor
from turnkan.numcore.functional import conv1d, dropout, max_pool1d


def glorot_uniform(rng: np.random.Generator, shape: tuple, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class Module:
    """Base class tracking parameters, sub-modules and the training flag"""

    def __init__(self) -> None:
        self.training = False

    def forward(self, x: Tensor) -> Tensor:
        raise NotImplementedError

    def __call__(self, x: Tensor) -> Tensor:
        return self.forward(x)

    def children(self) -> Iterator["Module"]:
        for value in vars(self).values():
            if isinstance(value, Module):
                yield value
            elif isinstance(value, (list, tuple)):
                yield from (item for item in value if isinstance(item, Module))

    def parameters(self) -> List[Parameter]:
        """Parameters in definition order, own before children's"""
        params: List[Parameter] = []
        for value in vars(self).values():
            if isinstance(value, Parameter):
                params.append(value)
            elif isinstance(value, Module):
                params.extend(value.parameters())
            elif isinstance(value, (list, tuple)):
                for item in value:
                    if isinstance(item, Module):
                        params.extend(item.parameters())
        return params

    def num_parameters(self) -> int:
        return sum(p.size for p in self.parameters())

    def train(self, mode: bool = True) -> "Module":
        self.training = mode
        for child in self.children():
            child.train(mode)
        return self

    def eval(self) -> "Module":
        return self.train(False)


class Dense(Module):
    """Fully connected layer x @ W + b"""

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator, name: str = "dense"):
        super().__init__()
        self.weight = Parameter(
            glorot_uniform(rng, (in_features, out_features), in_features, out_features),
            name=f"{name}.weight",
        )
        self.bias = Parameter(np.zeros(out_features), name=f"{name}.bias")

    def forward(self, x: Tensor) -> Tensor:
        return x @ self.weight + self.bias


class Activation(Module):
    def __init__(self, name: str):
        super().__init__()
        self.name = name

    def forward(self, x: Tensor) -> Tensor:
        return static_activation(self.name, x)


class Conv1d(Module):
    """Cross-correlation over time with per-filter bias"""

    def __init__(
        self,
        in_channels: int,
        filters: int,
        kernel_size: int,
        padding: str,
        rng: np.random.Generator,
        name: str = "conv",
    ):
        super().__init__()
        self.padding = padding
        self.weight = Parameter(
            glorot_uniform(
                rng, (filters, in_channels, kernel_size), in_channels * kernel_size, filters * kernel_size
            ),
            name=f"{name}.weight",
        )
        self.bias = Parameter(np.zeros(filters), name=f"{name}.bias")

    def forward(self, x: Tensor) -> Tensor:
        return conv1d(x, self.weight, self.bias, self.padding)


class MaxPool1d(Module):
    def __init__(self, pool_size: int):
        super().__init__()
        self.pool_size = pool_size

    def forward(self, x: Tensor) -> Tensor:
        return max_pool1d(x, self.pool_size)


class Dropout(Module):
    """Inverted dropout drawing masks from the owning model's generator"""

    def __init__(self, rate: float, rng: np.random.Generator):
        super().__init__()
        self.rate = rate
        self.rng = rng

    def forward(self, x: Tensor) -> Tensor:
        return dropout(x, self.rate, self.rng, self.training)


class KANLayer(Module):
    """
    Kolmogorov-Arnold layer with a learnable function on every edge

    Edge (i, j) computes w_b * silu(x_i) + w_s * sum_m c_m B_m(tanh(x_i)) and
    output node j sums its incoming edges. tanh keeps spline inputs inside the
    [-1, 1] grid. There is no node bias, so each edge owns grid_size + order + 2
    parameters.
    """

    def __init__(
        self,
        in_features: int,
        out_features: int,
        grid: BSplineGrid,
        rng: np.random.Generator,
        name: str = "kan",
    ):
        super().__init__()
        self.grid = grid
        self.in_features = in_features
        self.out_features = out_features
        self.base_weight = Parameter(np.ones((in_features, out_features)), name=f"{name}.base_weight")
        self.spline_weight = Parameter(np.ones((in_features, out_features)), name=f"{name}.spline_weight")
        self.coefficients = Parameter(
            rng.normal(0.0, 0.1, size=(in_features, out_features, grid.num_basis)),
            name=f"{name}.coefficients",
        )

    def forward(self, x: Tensor) -> Tensor:
        batch = x.shape[0]
        n_basis = self.grid.num_basis
        base = x.silu() @ self.base_weight
        # (batch, in, basis) x (in, basis, out) contracted over (in, basis)
        bases = bspline_basis(x.tanh(), self.grid).reshape(batch, self.in_features * n_basis)
        scaled = self.coefficients * self.spline_weight.reshape(self.in_features, self.out_features, 1)
        kernel = scaled.transpose(0, 2, 1).reshape(self.in_features * n_basis, self.out_features)
        return base + bases @ kernel

    def l1_penalty(self) -> Tensor:
        return self.coefficients.abs().sum()


class FKANActivation(Module):
    """
    Fractional-Jacobi activation applied per conv filter

    x maps to t = 2 * sigmoid(x) ** lam - 1 in (-1, 1), then to
    sum_d a_{f,d} P_d(t). lam = sigmoid(rho) stays in (0, 1) and starts at
    the configured exponent.
    """

    def __init__(self, filters: int, params: JacobiParams, rng: np.random.Generator, name: str = "fkan"):
        super().__init__()
        self.params = params
        self.filters = filters
        lam = min(params.fractional_exponent, 1.0 - 1e-6)
        self.rho = Parameter(np.array([np.log(lam / (1.0 - lam))]), name=f"{name}.rho")
        coefficients = rng.normal(0.0, 0.1, size=(filters, params.degree + 1))
        coefficients[:, 1] += 1.0
        self.coefficients = Parameter(coefficients, name=f"{name}.coefficients")

    @property
    def fractional_exponent(self) -> float:
        return float(1.0 / (1.0 + np.exp(-self.rho.data[0])))

    def forward(self, x: Tensor) -> Tensor:
        lam = self.rho.sigmoid()
        t = fractional_transform(x, lam) * 2.0 - 1.0
        poly = jacobi_eval(self.params.degree, self.params.alpha, self.params.beta, t)
        weights = self.coefficients.reshape(1, self.filters, 1, self.params.degree + 1)
        return (poly * weights).sum(axis=-1)


class Sequential(Module):
    def __init__(self, layers: Optional[List[Module]] = None):
        super().__init__()
        self.layers: List[Module] = list(layers or [])

    def append(self, layer: Module) -> None:
        self.layers.append(layer)

    def forward(self, x: Tensor) -> Tensor:
        for layer in self.layers:
            x = layer(x)
        return x
