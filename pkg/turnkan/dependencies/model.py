"""
Served-model dependency for FastAPI routes
"""
from functools import lru_cache
from pathlib import Path

from turnkan.config import settings
from turnkan.models.serialization import load_model
from turnkan.models.trained import TrainedModel
from turnkan.utils.exceptions import DatasetNotFoundError


@lru_cache(maxsize=4)
def _load(path: Path) -> TrainedModel:
    return load_model(path)


def get_model() -> TrainedModel:
    """
    Model named by settings.model_path, loaded once per path

    Raises:
        DatasetNotFoundError: No model configured, or the file is missing
        DataFormatError: The file is not a saved model
    """
    if settings.model_path is None:
        raise DatasetNotFoundError("No model configured; set TURNKAN_MODEL_PATH")
    return _load(Path(settings.model_path))
