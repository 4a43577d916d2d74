"""
Mixed integer / real / categorical search spaces and the two model presets
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from turnkan.schemas.model import (
    CONV_ACTIVATIONS,
    STATIC_CONV_ACTIVATIONS,
    ModelConfig,
    ModelFamily,
    conv_feature_lengths,
)
from turnkan.utils.exceptions import ConfigurationError, ShapeError

MAX_HIDDEN_LAYERS = 5
MAX_CONV_LAYERS = 6
MAX_DENSE_LAYERS = 3
# reals are snapped to this many significant digits so decode(encode(c)) == c
REAL_DIGITS = 12


def _snap(value: float) -> float:
    return float(f"{value:.{REAL_DIGITS}g}")


@dataclass(frozen=True)
class Integer:
    name: str
    low: int
    high: int

    width = 1

    def encode(self, value: int) -> List[float]:
        return [float(value)]

    def decode(self, coords: np.ndarray) -> int:
        return int(np.clip(np.rint(coords[0]), self.low, self.high))

    def sample(self, u: float) -> int:
        return min(self.low + int(u * (self.high - self.low + 1)), self.high)

    def to_unit(self, coords: np.ndarray) -> np.ndarray:
        span = self.high - self.low
        return (coords - self.low) / span if span else np.zeros_like(coords)


@dataclass(frozen=True)
class Real:
    """Continuous range; log dimensions are coordinated in log10"""
    name: str
    low: float
    high: float
    log: bool = False

    width = 1

    def _bounds(self) -> Tuple[float, float]:
        if self.log:
            return float(np.log10(self.low)), float(np.log10(self.high))
        return self.low, self.high

    def encode(self, value: float) -> List[float]:
        return [float(np.log10(value)) if self.log else float(value)]

    def decode(self, coords: np.ndarray) -> float:
        lo, hi = self._bounds()
        x = float(np.clip(coords[0], lo, hi))
        value = 10.0 ** x if self.log else x
        return float(np.clip(_snap(value), self.low, self.high))

    def sample(self, u: float) -> float:
        lo, hi = self._bounds()
        return self.decode(np.array([lo + u * (hi - lo)]))

    def to_unit(self, coords: np.ndarray) -> np.ndarray:
        lo, hi = self._bounds()
        return (coords - lo) / (hi - lo)


@dataclass(frozen=True)
class Categorical:
    """One-hot coded choice; decode takes the largest coordinate"""
    name: str
    choices: Tuple[Any, ...]

    @property
    def width(self) -> int:
        return len(self.choices)

    def encode(self, value: Any) -> List[float]:
        if value not in self.choices:
            raise ConfigurationError(f"{value!r} is not one of {self.choices}", self.name)
        return [1.0 if choice == value else 0.0 for choice in self.choices]

    def decode(self, coords: np.ndarray) -> Any:
        return self.choices[int(np.argmax(coords))]

    def sample(self, u: float) -> Any:
        return self.choices[min(int(u * len(self.choices)), len(self.choices) - 1)]

    def to_unit(self, coords: np.ndarray) -> np.ndarray:
        return np.clip(coords, 0.0, 1.0)


Dimension = Union[Integer, Real, Categorical]


@dataclass
class SearchSpace:
    """
    Ordered dimensions plus optional converters between value mappings and
    domain objects (ModelConfig for the model presets)
    """
    name: str
    dimensions: List[Dimension]
    builder: Optional[Callable[[Dict[str, Any]], Any]] = None
    extractor: Optional[Callable[[Any], Dict[str, Any]]] = None
    _slices: List[slice] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._slices = []
        offset = 0
        for dim in self.dimensions:
            self._slices.append(slice(offset, offset + dim.width))
            offset += dim.width

    @property
    def n_dims(self) -> int:
        return len(self.dimensions)

    @property
    def n_coords(self) -> int:
        return self._slices[-1].stop if self._slices else 0

    def encode(self, obj: Any) -> np.ndarray:
        values = self.extractor(obj) if self.extractor else obj
        coords: List[float] = []
        for dim in self.dimensions:
            if dim.name not in values:
                raise ConfigurationError("missing value", dim.name)
            coords.extend(dim.encode(values[dim.name]))
        return np.array(coords)

    def decode_values(self, point: Sequence[float]) -> Dict[str, Any]:
        point = np.asarray(point, dtype=np.float64)
        if point.shape != (self.n_coords,):
            raise ShapeError("decode", f"point of shape {point.shape} for {self.n_coords} coordinates")
        return {dim.name: dim.decode(point[s]) for dim, s in zip(self.dimensions, self._slices)}

    def decode(self, point: Sequence[float]) -> Any:
        """Domain object for a point; out-of-bounds coordinates are clipped"""
        values = self.decode_values(point)
        return self.builder(values) if self.builder else values

    def sample(self, u: Sequence[float]) -> np.ndarray:
        """Lattice point from one uniform number per dimension"""
        values = {dim.name: dim.sample(float(x)) for dim, x in zip(self.dimensions, u)}
        return self.encode(self.builder(values) if self.builder else values)

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        return self.sample(rng.random(self.n_dims))

    def to_unit(self, points: np.ndarray) -> np.ndarray:
        """Scale coordinates into the unit cube for the surrogate"""
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        out = np.empty_like(points)
        for dim, s in zip(self.dimensions, self._slices):
            out[:, s] = dim.to_unit(points[:, s])
        return out


def _hidden_dimensions() -> List[Dimension]:
    dims: List[Dimension] = [Integer("n_layers", 1, MAX_HIDDEN_LAYERS)]
    dims += [Integer(f"width_{i}", 5, 100) for i in range(MAX_HIDDEN_LAYERS)]
    dims.append(Real("regularization", 1e-5, 1e-1, log=True))
    return dims


def _hidden_values(config: ModelConfig) -> Dict[str, Any]:
    widths = list(config.hidden_widths) + [5] * (MAX_HIDDEN_LAYERS - len(config.hidden_widths))
    values: Dict[str, Any] = {"n_layers": len(config.hidden_widths), "regularization": config.regularization}
    values.update({f"width_{i}": w for i, w in enumerate(widths)})
    return values


def mlp_kan_space(family: ModelFamily, window_size: int = 20) -> SearchSpace:
    """Layers, neurons and regularization, plus activation (MLP) or k and G (KAN)"""
    family = ModelFamily(family)
    if family.is_convolutional:
        raise ConfigurationError(f"{family.value} has no dense-network search space", "family")
    dims = _hidden_dimensions()
    if family == ModelFamily.MLP:
        dims.append(Categorical("activation", ("tanh", "relu", "silu")))
    else:
        dims += [Integer("spline_order", 1, 5), Integer("grid_size", 1, 15)]

    def build(values: Dict[str, Any]) -> ModelConfig:
        widths = [values[f"width_{i}"] for i in range(values["n_layers"])]
        extra = (
            {"activation": values["activation"]}
            if family == ModelFamily.MLP
            else {"spline_order": values["spline_order"], "grid_size": values["grid_size"]}
        )
        return ModelConfig(
            family=family,
            window_size=window_size,
            hidden_widths=widths,
            regularization=values["regularization"],
            **extra,
        )

    def extract(config: ModelConfig) -> Dict[str, Any]:
        values = _hidden_values(config)
        values.update(
            {"activation": config.activation, "spline_order": config.spline_order, "grid_size": config.grid_size}
        )
        return values

    return SearchSpace(name=f"{family.value.lower()}-space", dimensions=dims, builder=build, extractor=extract)


def feasible_conv_depth(
    window_size: int, kernels: Sequence[int], pools: Sequence[int], padding: str, depth: int
) -> int:
    """Deepest prefix of the stack, at most ``depth``, that keeps a feature length >= 1"""
    lengths = conv_feature_lengths(window_size, list(kernels[:depth]), list(pools[:depth]), padding)
    feasible = 0
    for length in lengths:
        if length < 1:
            break
        feasible += 1
    return feasible


def conv_space(family: ModelFamily) -> SearchSpace:
    """Every row of the CNN/FKAN architecture table, including the window size"""
    family = ModelFamily(family)
    if not family.is_convolutional:
        raise ConfigurationError(f"{family.value} has no conv search space", "family")
    activations = (
        STATIC_CONV_ACTIVATIONS if family == ModelFamily.CNN
        else tuple(a for a in CONV_ACTIVATIONS if a.startswith("fkan"))
    )
    dims: List[Dimension] = [
        Categorical("window_size", (10, 20, 30)),
        Integer("n_conv", 1, MAX_CONV_LAYERS),
    ]
    dims += [Integer(f"filters_{i}", 5, 200) for i in range(MAX_CONV_LAYERS)]
    dims += [Integer(f"kernel_{i}", 7, 15) for i in range(MAX_CONV_LAYERS)]
    dims += [Integer(f"pool_{i}", 1, 3) for i in range(MAX_CONV_LAYERS)]
    dims += [
        Categorical("padding", ("valid", "same")),
        Categorical("conv_activation", activations),
        Real("dropout", 0.2, 0.8),
        Categorical("global_average_pooling", (False, True)),
        Integer("n_dense", 0, MAX_DENSE_LAYERS),
    ]
    dims += [Integer(f"dense_{i}", 10, 500) for i in range(MAX_DENSE_LAYERS)]
    dims += [
        Categorical("dense_activation", ("relu", "tanh")),
        Real("learning_rate", 1e-4, 1e-2, log=True),
    ]

    def build(values: Dict[str, Any]) -> ModelConfig:
        window = values["window_size"]
        kernels = [values[f"kernel_{i}"] for i in range(MAX_CONV_LAYERS)]
        pools = [values[f"pool_{i}"] for i in range(MAX_CONV_LAYERS)]
        padding = values["padding"]
        depth = feasible_conv_depth(window, kernels, pools, padding, values["n_conv"])
        if depth == 0:
            # no valid-padded kernel fits this window
            padding = "same"
            depth = max(feasible_conv_depth(window, kernels, pools, padding, values["n_conv"]), 1)
        return ModelConfig(
            family=family,
            window_size=window,
            conv_filters=[values[f"filters_{i}"] for i in range(depth)],
            conv_kernels=kernels[:depth],
            conv_pools=pools[:depth],
            padding=padding,
            conv_activation=values["conv_activation"],
            dropout=values["dropout"],
            global_average_pooling=values["global_average_pooling"],
            dense_widths=[values[f"dense_{i}"] for i in range(values["n_dense"])],
            dense_activation=values["dense_activation"],
            learning_rate=values["learning_rate"],
        )

    def extract(config: ModelConfig) -> Dict[str, Any]:
        depth = len(config.conv_filters)
        pad = MAX_CONV_LAYERS - depth
        values: Dict[str, Any] = {
            "window_size": config.window_size,
            "n_conv": depth,
            "padding": config.padding,
            "conv_activation": config.conv_activation,
            "dropout": config.dropout,
            "global_average_pooling": config.global_average_pooling,
            "n_dense": len(config.dense_widths),
            "dense_activation": config.dense_activation,
            "learning_rate": config.learning_rate,
        }
        for prefix, items, filler in (
            ("filters", config.conv_filters, 5),
            ("kernel", config.conv_kernels, 7),
            ("pool", config.conv_pools, 1),
        ):
            values.update({f"{prefix}_{i}": v for i, v in enumerate(list(items) + [filler] * pad)})
        dense = list(config.dense_widths) + [10] * (MAX_DENSE_LAYERS - len(config.dense_widths))
        values.update({f"dense_{i}": v for i, v in enumerate(dense)})
        return values

    return SearchSpace(name=f"{family.value.lower()}-space", dimensions=dims, builder=build, extractor=extract)


def space_for(family: ModelFamily, window_size: int = 20) -> SearchSpace:
    family = ModelFamily(family)
    return conv_space(family) if family.is_convolutional else mlp_kan_space(family, window_size)
