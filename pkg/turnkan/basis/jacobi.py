"""
Jacobi polynomials through the three-term recurrence
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from turnkan.numcore.tensor import Tensor
from turnkan.utils.exceptions import ConfigurationError, DomainError

_EDGE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class JacobiParams:
    """Degree, exponents and fractional exponent of one FKAN expansion"""

    degree: int
    alpha: float = 0.0
    beta: float = 0.0
    fractional_exponent: float = 0.5

    def __post_init__(self) -> None:
        check_jacobi_params(self.degree, self.alpha, self.beta)
        if not 0.0 < self.fractional_exponent <= 1.0:
            raise ConfigurationError("fractional exponent must lie in (0, 1]", "fractional_exponent")


def check_jacobi_params(degree: int, alpha: float, beta: float) -> None:
    if degree < 0:
        raise ConfigurationError("Jacobi degree must be non-negative", "degree")
    if alpha <= -1.0 or beta <= -1.0:
        raise DomainError(f"Jacobi exponents must exceed -1, got alpha={alpha}, beta={beta}")


def jacobi_values(
    x: np.ndarray, degree: int, alpha: float = 0.0, beta: float = 0.0
) -> Tuple[np.ndarray, np.ndarray]:
    """
    P_0..P_degree and their x-derivatives

    Returns:
        (values, derivatives), each of shape x.shape + (degree + 1,)
    """
    check_jacobi_params(degree, alpha, beta)
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(x) > 1.0 + _EDGE_TOLERANCE):
        raise DomainError("Jacobi polynomials are evaluated on [-1, 1]")

    values = np.empty(x.shape + (degree + 1,))
    derivatives = np.empty_like(values)
    values[..., 0] = 1.0
    derivatives[..., 0] = 0.0
    if degree == 0:
        return values, derivatives

    ab = alpha + beta
    values[..., 1] = 0.5 * ((ab + 2.0) * x + (alpha - beta))
    derivatives[..., 1] = 0.5 * (ab + 2.0)
    for n in range(1, degree):
        c = 2.0 * n + ab
        a0 = 2.0 * (n + 1) * (n + ab + 1.0) * c
        a1 = (c + 1.0) * (c + 2.0) * c
        a2 = (c + 1.0) * (alpha * alpha - beta * beta)
        a3 = 2.0 * (n + alpha) * (n + beta) * (c + 2.0)
        values[..., n + 1] = ((a1 * x + a2) * values[..., n] - a3 * values[..., n - 1]) / a0
        derivatives[..., n + 1] = (
            (a1 * x + a2) * derivatives[..., n] + a1 * values[..., n] - a3 * derivatives[..., n - 1]
        ) / a0
    return values, derivatives


def jacobi_eval(
    degree: int, alpha: float, beta: float, x: Union[float, np.ndarray, Tensor]
) -> Union[np.ndarray, Tensor]:
    """
    Evaluate P_0^(alpha,beta)..P_degree^(alpha,beta) at x

    Tensor arguments produce a differentiable Tensor with a trailing degree axis.

    Raises:
        DomainError: If |x| > 1 or an exponent is not above -1
    """
    if not isinstance(x, Tensor):
        values, _ = jacobi_values(np.asarray(x, dtype=np.float64), degree, alpha, beta)
        return values

    values, derivatives = jacobi_values(x.data, degree, alpha, beta)

    def backward(g: np.ndarray) -> Tuple[np.ndarray]:
        return ((g * derivatives).sum(axis=-1),)

    return Tensor.from_op(values, (x,), backward, "jacobi")
