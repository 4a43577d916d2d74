"""
Gradient verification helpers
"""
from typing import Callable, List, Sequence, Tuple

import numpy as np

from turnkan.numcore.tensor import Parameter, Tensor
from turnkan.utils.exceptions import ConfigurationError

Graph = Callable[[], Tensor]


def forward_backward(graph: Graph, parameters: Sequence[Parameter]) -> Tuple[Tensor, List[np.ndarray]]:
    """
    Evaluate a scalar graph and return its output with one gradient per parameter

    Gradients are zeroed first so the result does not depend on earlier calls.
    """
    for p in parameters:
        p.zero_grad()
    output = graph()
    output.backward()
    return output, [p.grad.copy() for p in parameters]


def finite_diff_check(graph: Graph, parameter: Parameter, eps: float = 1e-4) -> float:
    """
    Compare analytic gradients against central differences

    Args:
        graph: Zero-argument callable building a scalar output from current values
        parameter: Parameter whose entries are perturbed
        eps: Central-difference step

    Returns:
        max |analytic - numeric| / max(|analytic|, |numeric|, 1e-12) over all entries
    """
    if eps <= 0:
        raise ConfigurationError("finite-difference step must be positive", "eps")

    _, (analytic,) = forward_backward(graph, [parameter])
    base = parameter.data.copy()
    numeric = np.zeros_like(base)
    try:
        for idx in np.ndindex(base.shape):
            shifted = base.copy()
            shifted[idx] = base[idx] + eps
            parameter.data = shifted
            f_plus = graph().item()
            shifted = base.copy()
            shifted[idx] = base[idx] - eps
            parameter.data = shifted
            f_minus = graph().item()
            numeric[idx] = (f_plus - f_minus) / (2.0 * eps)
    finally:
        parameter.data = base

    if base.size == 0:
        return 0.0
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-12)
    return float(np.max(np.abs(analytic - numeric) / scale))
