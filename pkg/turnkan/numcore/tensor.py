"""
Dense float64 tensors with tape-based reverse-mode differentiation
"""
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import expit

from turnkan.utils.exceptions import GradientError, ShapeError

ArrayLike = Union[float, int, Sequence[float], np.ndarray]
BackwardFn = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back down to the operand shape"""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _check_broadcast(op: str, a: "Tensor", b: "Tensor") -> None:
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(op, f"cannot broadcast {a.shape} with {b.shape}") from None


class Tensor:
    """
    Immutable float64 array that records how it was computed

    Every operation returns a new Tensor; when any operand requires a gradient
    the result keeps references to its parents and a closure mapping the
    output gradient to one gradient per parent.
    """

    __array_priority__ = 100

    def __init__(self, data: ArrayLike, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self._parents: Tuple["Tensor", ...] = ()
        self._backward: Optional[BackwardFn] = None
        self.op = "leaf"

    @staticmethod
    def from_op(
        data: np.ndarray,
        parents: Sequence["Tensor"],
        backward: BackwardFn,
        op: str,
    ) -> "Tensor":
        """Create the result of a differentiable operation"""
        out = Tensor(data)
        out.op = op
        if any(parent.requires_grad for parent in parents):
            out.requires_grad = True
            out._parents = tuple(parents)
            out._backward = backward
        return out

    # Introspection

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError("item", f"tensor of shape {self.shape} is not a scalar")
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def __len__(self) -> int:
        return self.data.shape[0]

    def __repr__(self) -> str:
        grad = ", requires_grad=True" if self.requires_grad else ""
        return f"Tensor(shape={self.shape}, op={self.op}{grad})"

    # Arithmetic

    def __add__(self, other: ArrayLike) -> "Tensor":
        other = as_tensor(other)
        _check_broadcast("add", self, other)
        a_shape, b_shape = self.shape, other.shape

        def backward(g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            return _unbroadcast(g, a_shape), _unbroadcast(g, b_shape)

        return Tensor.from_op(self.data + other.data, (self, other), backward, "add")

    def __radd__(self, other: ArrayLike) -> "Tensor":
        return as_tensor(other) + self

    def __sub__(self, other: ArrayLike) -> "Tensor":
        other = as_tensor(other)
        _check_broadcast("sub", self, other)
        a_shape, b_shape = self.shape, other.shape

        def backward(g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            return _unbroadcast(g, a_shape), _unbroadcast(-g, b_shape)

        return Tensor.from_op(self.data - other.data, (self, other), backward, "sub")

    def __rsub__(self, other: ArrayLike) -> "Tensor":
        return as_tensor(other) - self

    def __mul__(self, other: ArrayLike) -> "Tensor":
        other = as_tensor(other)
        _check_broadcast("mul", self, other)
        a, b = self.data, other.data

        def backward(g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            return _unbroadcast(g * b, a.shape), _unbroadcast(g * a, b.shape)

        return Tensor.from_op(a * b, (self, other), backward, "mul")

    def __rmul__(self, other: ArrayLike) -> "Tensor":
        return as_tensor(other) * self

    def __truediv__(self, other: ArrayLike) -> "Tensor":
        other = as_tensor(other)
        _check_broadcast("div", self, other)
        a, b = self.data, other.data

        def backward(g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            return _unbroadcast(g / b, a.shape), _unbroadcast(-g * a / (b * b), b.shape)

        return Tensor.from_op(a / b, (self, other), backward, "div")

    def __rtruediv__(self, other: ArrayLike) -> "Tensor":
        return as_tensor(other) / self

    def __neg__(self) -> "Tensor":
        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (-g,)

        return Tensor.from_op(-self.data, (self,), backward, "neg")

    def __pow__(self, exponent: float) -> "Tensor":
        if isinstance(exponent, Tensor):
            raise ShapeError("pow", "tensor exponents are not supported; use exp/log")
        a = self.data
        p = float(exponent)

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g * p * a ** (p - 1.0),)

        return Tensor.from_op(a ** p, (self,), backward, "pow")

    def __matmul__(self, other: ArrayLike) -> "Tensor":
        other = as_tensor(other)
        a, b = self.data, other.data
        if a.ndim not in (1, 2) or b.ndim not in (1, 2):
            raise ShapeError("matmul", f"operands must be 1-D or 2-D, got {a.shape} @ {b.shape}")
        if a.shape[-1] != b.shape[0]:
            raise ShapeError("matmul", f"inner extents differ: {a.shape} @ {b.shape}")

        def backward(g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            if a.ndim == 1 and b.ndim == 1:
                return g * b, g * a
            if b.ndim == 1:
                return np.outer(g, b), a.T @ g
            if a.ndim == 1:
                return b @ g, np.outer(a, g)
            return g @ b.T, a.T @ g

        return Tensor.from_op(a @ b, (self, other), backward, "matmul")

    # Reductions and reshaping

    def sum(self, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False) -> "Tensor":
        shape = self.shape

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            if axis is not None and not keepdims:
                g = np.expand_dims(g, axis)
            return (np.broadcast_to(g, shape),)

        return Tensor.from_op(self.data.sum(axis=axis, keepdims=keepdims), (self,), backward, "sum")

    def mean(self, axis: Optional[Union[int, Tuple[int, ...]]] = None, keepdims: bool = False) -> "Tensor":
        if axis is None:
            count = self.size
        else:
            axes = (axis,) if isinstance(axis, int) else axis
            count = int(np.prod([self.shape[ax] for ax in axes]))
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    def reshape(self, *shape: int) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        original = self.shape
        try:
            data = self.data.reshape(shape)
        except ValueError:
            raise ShapeError("reshape", f"cannot reshape {original} into {shape}") from None

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g.reshape(original),)

        return Tensor.from_op(data, (self,), backward, "reshape")

    def transpose(self, *axes: int) -> "Tensor":
        if not axes:
            axes = tuple(reversed(range(self.ndim)))
        inverse = tuple(np.argsort(axes))

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g.transpose(inverse),)

        return Tensor.from_op(self.data.transpose(axes), (self,), backward, "transpose")

    def __getitem__(self, index: object) -> "Tensor":
        shape = self.shape

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            full = np.zeros(shape)
            np.add.at(full, index, g)
            return (full,)

        return Tensor.from_op(self.data[index], (self,), backward, "getitem")

    # Elementwise functions

    def exp(self) -> "Tensor":
        out = np.exp(self.data)

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g * out,)

        return Tensor.from_op(out, (self,), backward, "exp")

    def log(self) -> "Tensor":
        a = self.data

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g / a,)

        return Tensor.from_op(np.log(a), (self,), backward, "log")

    def tanh(self) -> "Tensor":
        out = np.tanh(self.data)

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g * (1.0 - out * out),)

        return Tensor.from_op(out, (self,), backward, "tanh")

    def sigmoid(self) -> "Tensor":
        out = expit(self.data)

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g * out * (1.0 - out),)

        return Tensor.from_op(out, (self,), backward, "sigmoid")

    def log_sigmoid(self) -> "Tensor":
        a = self.data

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g * expit(-a),)

        return Tensor.from_op(-np.logaddexp(0.0, -a), (self,), backward, "log_sigmoid")

    def relu(self) -> "Tensor":
        a = self.data
        # derivative at 0 is taken as 0
        mask = a > 0.0

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g * mask,)

        return Tensor.from_op(np.where(mask, a, 0.0), (self,), backward, "relu")

    def silu(self) -> "Tensor":
        a = self.data
        s = expit(a)

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g * (s + a * s * (1.0 - s)),)

        return Tensor.from_op(a * s, (self,), backward, "silu")

    def abs(self) -> "Tensor":
        a = self.data

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            return (g * np.sign(a),)

        return Tensor.from_op(np.abs(a), (self,), backward, "abs")

    def square(self) -> "Tensor":
        return self ** 2

    # Differentiation

    def _topological_order(self) -> List["Tensor"]:
        """Nodes reachable from self, consumers before producers"""
        order: List[Tensor] = []
        visited = set()
        stack: List[Tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, finished = stack.pop()
            if finished:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
        order.reverse()
        return order

    def backward(self) -> None:
        """
        Accumulate d(self)/d(leaf) into the ``grad`` of every reachable leaf

        Raises:
            GradientError: If self is not a scalar
        """
        if self.data.size != 1:
            raise GradientError(f"backward requires a scalar root, got shape {self.shape}")
        if not self.requires_grad:
            return

        grads = {id(self): np.ones_like(self.data)}
        for node in self._topological_order():
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node._backward is None:
                g = np.asarray(g).reshape(node.shape)
                node.grad = g.copy() if node.grad is None else node.grad + g
                continue
            for parent, parent_grad in zip(node._parents, node._backward(g)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                grads[key] = parent_grad if key not in grads else grads[key] + parent_grad


class Parameter(Tensor):
    """Learnable leaf tensor owning its gradient buffer"""

    def __init__(self, data: ArrayLike, name: str = "", requires_grad: bool = True):
        super().__init__(np.array(data, dtype=np.float64), requires_grad=requires_grad)
        self.name = name
        self.grad = np.zeros_like(self.data)

    @property
    def value(self) -> np.ndarray:
        return self.data

    def zero_grad(self) -> None:
        self.grad = np.zeros_like(self.data)

    def assign(self, values: ArrayLike) -> None:
        """Replace the parameter value, keeping its shape"""
        values = np.array(values, dtype=np.float64)
        if values.shape != self.data.shape:
            raise ShapeError("assign", f"{values.shape} into parameter of shape {self.data.shape}")
        self.data = values

    def __repr__(self) -> str:
        return f"Parameter(name={self.name!r}, shape={self.shape})"


def as_tensor(value: Union[Tensor, ArrayLike]) -> Tensor:
    """Wrap constants so they can take part in an expression"""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)
