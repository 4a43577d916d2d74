"""
Model configuration schemas
"""
import re
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from turnkan.utils.exceptions import configuration_error_from_validation

HiddenWidth = Annotated[int, Field(ge=5, le=100)]
ConvFilters = Annotated[int, Field(ge=5, le=200)]
ConvKernel = Annotated[int, Field(ge=7, le=15)]
ConvPool = Annotated[int, Field(ge=1, le=3)]
DenseWidth = Annotated[int, Field(ge=10, le=500)]

FKAN_ACTIVATION = re.compile(r"^fkan-([1-6])$")
STATIC_CONV_ACTIVATIONS = ("relu", "tanh")
CONV_ACTIVATIONS = STATIC_CONV_ACTIVATIONS + tuple(f"fkan-{d}" for d in range(1, 7))


class ModelFamily(str, Enum):
    """Classifier family"""
    MLP = "MLP"
    KAN = "KAN"
    CNN = "CNN"
    FKAN = "FKAN"

    @property
    def is_convolutional(self) -> bool:
        return self in (ModelFamily.CNN, ModelFamily.FKAN)


def conv_feature_lengths(
    window_size: int, kernels: List[int], pools: List[int], padding: str
) -> List[int]:
    """Sequence length after every conv block; a non-positive entry means infeasible"""
    lengths = []
    length = window_size
    for kernel, pool in zip(kernels, pools):
        if padding == "valid":
            length = length - kernel + 1
        if length >= 1 and pool > 1:
            length //= pool
        lengths.append(length)
        if length < 1:
            break
    return lengths


class ModelConfig(BaseModel):
    """
    Architecture and training knobs of one classifier

    MLP and KAN read ``hidden_widths``; CNN and FKAN read the conv and dense
    fields. Fields of the other families are carried but ignored.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: ModelFamily = Field(description="Classifier family")
    window_size: Literal[10, 20, 30] = Field(default=20, description="Samples per window")

    # MLP / KAN
    hidden_widths: List[HiddenWidth] = Field(
        default=[80], min_length=1, max_length=5, description="Hidden layer widths"
    )
    activation: Literal["tanh", "relu", "silu"] = Field(default="tanh", description="MLP node activation")
    regularization: float = Field(
        default=1e-4, ge=1e-5, le=1e-1, description="L2 strength (MLP) or spline L1 strength (KAN)"
    )
    spline_order: int = Field(default=3, ge=1, le=5, description="KAN B-spline order k")
    grid_size: int = Field(default=5, ge=1, le=15, description="KAN grid intervals G")

    # CNN / FKAN
    conv_filters: List[ConvFilters] = Field(default=[32], min_length=1, max_length=6)
    conv_kernels: List[ConvKernel] = Field(default=[7], min_length=1, max_length=6)
    conv_pools: List[ConvPool] = Field(default=[2], min_length=1, max_length=6)
    padding: Literal["valid", "same"] = Field(default="same", description="Conv padding")
    conv_activation: str = Field(default="relu", description="relu, tanh or fkan-1..fkan-6")
    dropout: float = Field(default=0.3, ge=0.2, le=0.8, description="Dropout rate")
    global_average_pooling: bool = Field(default=False, description="Pool features instead of flattening")
    dense_widths: List[DenseWidth] = Field(default=[64], max_length=3, description="Classifier widths")
    dense_activation: Literal["relu", "tanh"] = Field(default="relu", description="Classifier activation")
    learning_rate: float = Field(default=1e-3, ge=1e-4, le=1e-2, description="Adam learning rate")

    @field_validator("conv_activation")
    @classmethod
    def check_conv_activation(cls, v: str) -> str:
        if v not in CONV_ACTIVATIONS:
            raise ValueError(f"must be one of {CONV_ACTIVATIONS}")
        return v

    @model_validator(mode="after")
    def check_conv_stack(self) -> "ModelConfig":
        if not self.family.is_convolutional:
            return self
        depth = len(self.conv_filters)
        if len(self.conv_kernels) != depth or len(self.conv_pools) != depth:
            raise ValueError("conv_filters, conv_kernels and conv_pools must have equal length")
        is_fkan = self.fkan_degree is not None
        if self.family == ModelFamily.FKAN and not is_fkan:
            raise ValueError("FKAN models need an fkan-d conv activation")
        if self.family == ModelFamily.CNN and is_fkan:
            raise ValueError("CNN models use relu or tanh conv activations")
        lengths = conv_feature_lengths(self.window_size, self.conv_kernels, self.conv_pools, self.padding)
        if len(lengths) < depth or lengths[-1] < 1:
            raise ValueError(
                f"conv stack leaves no features for a {self.window_size}-sample window"
            )
        return self

    @property
    def fkan_degree(self) -> Optional[int]:
        match = FKAN_ACTIVATION.match(self.conv_activation)
        return int(match.group(1)) if match else None

    @property
    def feature_length(self) -> int:
        """Sequence length entering the classifier of a conv model"""
        return conv_feature_lengths(self.window_size, self.conv_kernels, self.conv_pools, self.padding)[-1]

    def summary(self) -> Dict[str, Any]:
        """Fields relevant to the family, for logs and reports"""
        common = {"family": self.family.value, "window_size": self.window_size}
        if self.family == ModelFamily.MLP:
            keys = ["hidden_widths", "activation", "regularization"]
        elif self.family == ModelFamily.KAN:
            keys = ["hidden_widths", "spline_order", "grid_size", "regularization"]
        else:
            keys = [
                "conv_filters", "conv_kernels", "conv_pools", "padding", "conv_activation",
                "dropout", "global_average_pooling", "dense_widths", "dense_activation",
                "learning_rate",
            ]
        return {**common, **{key: getattr(self, key) for key in keys}}


def parse_model_config(data: Dict[str, Any]) -> ModelConfig:
    """
    Validate a raw mapping into a ModelConfig

    Raises:
        ConfigurationError: Naming the first offending field
    """
    try:
        return ModelConfig.model_validate(data)
    except ValidationError as e:
        raise configuration_error_from_validation(e) from None
