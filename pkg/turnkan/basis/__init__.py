"""
Edge-function bases for KAN and FKAN layers
"""

from .activations import STATIC_ACTIVATIONS, fractional_transform, static_activation
from .bspline import BSplineGrid, bspline_basis, bspline_values
from .jacobi import JacobiParams, jacobi_eval, jacobi_values

__all__ = [
    "BSplineGrid",
    "bspline_basis",
    "bspline_values",
    "JacobiParams",
    "jacobi_eval",
    "jacobi_values",
    "STATIC_ACTIVATIONS",
    "static_activation",
    "fractional_transform",
]
