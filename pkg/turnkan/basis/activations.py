"""
Static activations and the fractional input map of FKAN blocks
"""
from typing import Union

import numpy as np
from scipy.special import expit

from turnkan.numcore.tensor import Tensor
from turnkan.utils.exceptions import ConfigurationError

Value = Union[float, np.ndarray, Tensor]

STATIC_ACTIVATIONS = ("tanh", "relu", "silu")


def static_activation(name: str, x: Value) -> Value:
    """
    Apply tanh, relu or silu (x * sigmoid(x))

    Raises:
        ConfigurationError: If the name is not recognized
    """
    if name not in STATIC_ACTIVATIONS:
        raise ConfigurationError(
            f"unknown activation {name!r}, expected one of {STATIC_ACTIVATIONS}", "activation"
        )
    if isinstance(x, Tensor):
        return getattr(x, name)()
    x = np.asarray(x, dtype=np.float64)
    if name == "tanh":
        return np.tanh(x)
    if name == "relu":
        return np.where(x > 0.0, x, 0.0)
    return x * expit(x)


def fractional_transform(x: Value, lam: Value) -> Value:
    """
    sigmoid(x) ** lam, mapping the real line into (0, 1)

    Computed as exp(lam * log_sigmoid(x)) so both arguments can carry gradients.
    """
    if isinstance(x, Tensor) or isinstance(lam, Tensor):
        x_t = x if isinstance(x, Tensor) else Tensor(x)
        return (x_t.log_sigmoid() * lam).exp()
    lam_arr = np.asarray(lam, dtype=np.float64)
    if np.any(lam_arr <= 0.0) or np.any(lam_arr > 1.0):
        raise ConfigurationError("fractional exponent must lie in (0, 1]", "fractional_exponent")
    return expit(np.asarray(x, dtype=np.float64)) ** lam_arr
