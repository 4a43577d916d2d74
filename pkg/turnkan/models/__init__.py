"""
Classifier families, construction and persistence
"""
from turnkan.models.factory import build_model
from turnkan.models.layers import Conv1d, Dense, FKANActivation, KANLayer, Module
from turnkan.models.networks import ConvNetwork, KANNetwork, MLPNetwork, expected_parameter_count
from turnkan.models.presets import preset_config
from turnkan.models.serialization import load_model, save_model
from turnkan.models.trained import TrainedModel

__all__ = [
    "Conv1d",
    "ConvNetwork",
    "Dense",
    "FKANActivation",
    "KANLayer",
    "KANNetwork",
    "MLPNetwork",
    "Module",
    "TrainedModel",
    "build_model",
    "expected_parameter_count",
    "load_model",
    "preset_config",
    "save_model",
]
