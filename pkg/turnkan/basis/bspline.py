"""
Uniform B-spline bases evaluated with the Cox-de Boor recursion
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from turnkan.numcore.tensor import Tensor
from turnkan.utils.exceptions import ConfigurationError


@dataclass(frozen=True)
class BSplineGrid:
    """
    Extended uniform knot vector over a closed domain

    ``grid_size`` intervals cover ``domain`` and ``order`` extra knots are
    appended on each side, giving ``grid_size + 2 * order + 1`` knots and
    ``grid_size + order`` basis functions.
    """

    grid_size: int
    order: int
    domain: Tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self) -> None:
        if self.grid_size < 1:
            raise ConfigurationError("grid size must be at least 1", "grid_size")
        if self.order < 0:
            raise ConfigurationError("spline order must be non-negative", "spline_order")
        if not self.domain[0] < self.domain[1]:
            raise ConfigurationError("domain must satisfy a < b", "domain")

    @property
    def step(self) -> float:
        return (self.domain[1] - self.domain[0]) / self.grid_size

    @property
    def knots(self) -> np.ndarray:
        offsets = np.arange(-self.order, self.grid_size + self.order + 1, dtype=np.float64)
        return self.domain[0] + offsets * self.step

    @property
    def num_basis(self) -> int:
        return self.grid_size + self.order


def bspline_values(x: np.ndarray, grid: BSplineGrid) -> Tuple[np.ndarray, np.ndarray]:
    """
    Basis values and their derivatives with respect to x

    Inputs outside the domain are clamped to it, so their derivative is zero.

    Returns:
        (values, derivatives), each of shape x.shape + (grid.num_basis,)
    """
    x = np.asarray(x, dtype=np.float64)
    a, b = grid.domain
    k, size = grid.order, grid.grid_size
    t = grid.knots
    inside = (x >= a) & (x <= b)
    xc = np.clip(x, a, b)

    # degree 0: indicator of the knot interval holding x; x == b uses the last one
    interval = np.clip(np.floor((xc - a) / grid.step).astype(np.int64), 0, size - 1) + k
    bases = np.zeros(x.shape + (size + 2 * k,))
    np.put_along_axis(bases, interval[..., None], 1.0, axis=-1)

    xe = xc[..., None]
    lower = bases
    for p in range(1, k + 1):
        lower = bases
        left = (xe - t[:-(p + 1)]) / (t[p:-1] - t[:-(p + 1)]) * lower[..., :-1]
        right = (t[p + 1:] - xe) / (t[p + 1:] - t[1:-p]) * lower[..., 1:]
        bases = left + right

    if k == 0:
        derivatives = np.zeros_like(bases)
    else:
        derivatives = (
            k / (t[k:-1] - t[:-(k + 1)]) * lower[..., :-1]
            - k / (t[k + 1:] - t[1:-k]) * lower[..., 1:]
        )
        derivatives = derivatives * inside[..., None]
    return bases, derivatives


def bspline_basis(
    x: Union[float, np.ndarray, Tensor], grid: BSplineGrid
) -> Union[np.ndarray, Tensor]:
    """
    Evaluate all ``grid.num_basis`` basis functions at x

    A Tensor argument yields a differentiable Tensor with a trailing basis
    axis; plain numbers and arrays yield arrays.
    """
    if not isinstance(x, Tensor):
        values, _ = bspline_values(np.asarray(x, dtype=np.float64), grid)
        return values

    values, derivatives = bspline_values(x.data, grid)

    def backward(g: np.ndarray) -> Tuple[np.ndarray]:
        return ((g * derivatives).sum(axis=-1),)

    return Tensor.from_op(values, (x,), backward, "bspline_basis")
