"""
Composite differentiable operations: convolution, pooling, dropout and the
fused softmax + weighted cross-entropy loss
"""
from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from turnkan.numcore.tensor import Tensor
from turnkan.utils.exceptions import DomainError, ShapeError


def same_padding(kernel_size: int) -> Tuple[int, int]:
    """Left/right zero padding that keeps the sequence length"""
    total = kernel_size - 1
    left = total // 2
    return left, total - left


def conv1d(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None, padding: str = "valid") -> Tensor:
    """
    One-dimensional cross-correlation over the last axis

    Args:
        x: Input of shape (batch, in_channels, length)
        weight: Kernels of shape (filters, in_channels, kernel_size)
        bias: Optional per-filter offsets of shape (filters,)
        padding: "valid" or "same"

    Returns:
        Tensor of shape (batch, filters, out_length)
    """
    if x.ndim != 3 or weight.ndim != 3:
        raise ShapeError("conv1d", f"expected 3-D input and kernel, got {x.shape} and {weight.shape}")
    batch, channels, length = x.shape
    filters, kernel_channels, kernel_size = weight.shape
    if channels != kernel_channels:
        raise ShapeError("conv1d", f"input has {channels} channels, kernel expects {kernel_channels}")
    if padding == "same":
        left, right = same_padding(kernel_size)
    elif padding == "valid":
        left, right = 0, 0
    else:
        raise ShapeError("conv1d", f"unknown padding {padding!r}")
    padded_length = length + left + right
    if padded_length < kernel_size:
        raise ShapeError("conv1d", f"length {length} is shorter than kernel {kernel_size}")

    xp = np.pad(x.data, ((0, 0), (0, 0), (left, right))) if left or right else x.data
    out_length = padded_length - kernel_size + 1
    # (batch, channels, out_length, kernel) -> (batch * out_length, channels * kernel)
    cols = sliding_window_view(xp, kernel_size, axis=2)
    cols = cols.transpose(0, 2, 1, 3).reshape(batch * out_length, channels * kernel_size)
    w = weight.data
    w_flat = w.reshape(filters, channels * kernel_size)
    out = (cols @ w_flat.T).reshape(batch, out_length, filters).transpose(0, 2, 1)
    if bias is not None:
        out = out + bias.data[None, :, None]

    def backward(g: np.ndarray) -> Tuple[np.ndarray, ...]:
        g_rows = g.transpose(0, 2, 1).reshape(batch * out_length, filters)
        grad_w = (g_rows.T @ cols).reshape(filters, channels, kernel_size)
        grad_xp = np.zeros_like(xp)
        for k in range(kernel_size):
            grad_xp[:, :, k:k + out_length] += np.einsum("bfl,fc->bcl", g, w[:, :, k])
        grad_x = grad_xp[:, :, left:left + length]
        if bias is None:
            return grad_x, grad_w
        return grad_x, grad_w, g.sum(axis=(0, 2))

    parents = (x, weight) if bias is None else (x, weight, bias)
    return Tensor.from_op(out, parents, backward, "conv1d")


def max_pool1d(x: Tensor, pool_size: int) -> Tensor:
    """
    Non-overlapping max pooling over the last axis

    Trailing samples that do not fill a pool are dropped; ties resolve to the
    earliest index.
    """
    if pool_size <= 1:
        return x
    if x.ndim != 3:
        raise ShapeError("max_pool1d", f"expected 3-D input, got {x.shape}")
    batch, channels, length = x.shape
    out_length = length // pool_size
    if out_length < 1:
        raise ShapeError("max_pool1d", f"length {length} is shorter than pool {pool_size}")
    blocks = x.data[:, :, :out_length * pool_size].reshape(batch, channels, out_length, pool_size)
    winners = blocks.argmax(axis=3)
    out = np.take_along_axis(blocks, winners[..., None], axis=3)[..., 0]

    def backward(g: np.ndarray) -> Tuple[np.ndarray]:
        grad_blocks = np.zeros_like(blocks)
        np.put_along_axis(grad_blocks, winners[..., None], g[..., None], axis=3)
        grad = np.zeros((batch, channels, length))
        grad[:, :, :out_length * pool_size] = grad_blocks.reshape(batch, channels, out_length * pool_size)
        return (grad,)

    return Tensor.from_op(out, (x,), backward, "max_pool1d")


def dropout(x: Tensor, rate: float, rng: np.random.Generator, training: bool) -> Tensor:
    """Inverted dropout; identity outside training"""
    if not training or rate <= 0.0:
        return x
    keep = 1.0 - rate
    mask = (rng.random(x.shape) < keep) / keep
    return x * Tensor(mask)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax of a (batch, classes) array"""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def weighted_cross_entropy(logits: Tensor, labels: np.ndarray, class_weights: np.ndarray) -> Tensor:
    """
    Mean over the batch of w[y] * -log softmax(logits)[y]

    Softmax and the log are fused through log-sum-exp so large logit gaps
    stay finite.

    Args:
        logits: (batch, classes) scores
        labels: integer class indices of length batch
        class_weights: one weight per class

    Returns:
        Scalar loss tensor
    """
    if logits.ndim != 2:
        raise ShapeError("weighted_cross_entropy", f"logits must be 2-D, got {logits.shape}")
    batch, classes = logits.shape
    labels = np.asarray(labels, dtype=np.int64)
    class_weights = np.asarray(class_weights, dtype=np.float64)
    if labels.shape != (batch,):
        raise ShapeError("weighted_cross_entropy", f"labels of shape {labels.shape} for {batch} rows")
    if class_weights.shape != (classes,):
        raise ShapeError("weighted_cross_entropy", f"{class_weights.size} weights for {classes} classes")
    if batch and (labels.min() < 0 or labels.max() >= classes):
        raise DomainError(f"labels must lie in [0, {classes}), got {sorted(set(labels.tolist()))}")

    log_probs = log_softmax(logits.data)
    rows = np.arange(batch)
    sample_weights = class_weights[labels]
    loss = float(np.mean(sample_weights * -log_probs[rows, labels]))

    def backward(g: np.ndarray) -> Tuple[np.ndarray]:
        grad = np.exp(log_probs)
        grad[rows, labels] -= 1.0
        grad *= (sample_weights / batch)[:, None]
        return (g * grad,)

    return Tensor.from_op(np.asarray(loss), (logits,), backward, "weighted_cross_entropy")
