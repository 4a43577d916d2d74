"""
Minimal dense-tensor engine with reverse-mode differentiation
"""

from .tensor import Parameter, Tensor, as_tensor
from .optim import Adam, adam_step
from .gradcheck import finite_diff_check, forward_backward

__all__ = [
    "Tensor",
    "Parameter",
    "as_tensor",
    "Adam",
    "adam_step",
    "forward_backward",
    "finite_diff_check",
]
