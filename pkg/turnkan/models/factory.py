"""
Model construction
"""
import logging
from typing import Any, Dict, Union

import numpy as np

from turnkan.models.networks import expected_parameter_count, network_for
from turnkan.models.trained import TrainedModel
from turnkan.schemas.model import ModelConfig, parse_model_config
from turnkan.utils.exceptions import ShapeError

logger = logging.getLogger(__name__)


def build_model(config: Union[ModelConfig, Dict[str, Any]], seed: int) -> TrainedModel:
    """
    Build an untrained model with seeded initialization

    Args:
        config: A ModelConfig or a raw mapping validated into one
        seed: Seeds initialization and the dropout masks drawn during training

    Raises:
        ConfigurationError: If a raw mapping is invalid, naming the field
    """
    if not isinstance(config, ModelConfig):
        config = parse_model_config(config)
    rng = np.random.default_rng(seed)
    network = network_for(config, rng)
    count = network.num_parameters()
    if count != expected_parameter_count(config):
        raise ShapeError("build_model", f"built {count} parameters, config implies {expected_parameter_count(config)}")
    logger.debug(f"Built {config.family.value} with {count} parameters (seed {seed})")
    return TrainedModel(config=config, network=network, seed=seed)
