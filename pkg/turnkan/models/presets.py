"""
Fixed desk-scale configurations per family
"""
from typing import Dict

from turnkan.schemas.model import ModelConfig, ModelFamily

_PRESETS: Dict[ModelFamily, dict] = {
    ModelFamily.MLP: {"hidden_widths": [80, 35, 80, 45], "activation": "tanh", "regularization": 1e-4},
    ModelFamily.KAN: {"hidden_widths": [80], "grid_size": 9, "spline_order": 1, "regularization": 1e-4},
    ModelFamily.CNN: {
        "conv_filters": [32, 32],
        "conv_kernels": [7, 7],
        "conv_pools": [2, 2],
        "padding": "same",
        "conv_activation": "relu",
        "dropout": 0.3,
        "dense_widths": [64],
        "dense_activation": "relu",
        "learning_rate": 3e-3,
    },
}
_PRESETS[ModelFamily.FKAN] = {**_PRESETS[ModelFamily.CNN], "conv_activation": "fkan-3"}


def preset_config(family: ModelFamily, window_size: int = 20) -> ModelConfig:
    """Default architecture for a family at the given window size"""
    family = ModelFamily(family)
    return ModelConfig(family=family, window_size=window_size, **_PRESETS[family])
