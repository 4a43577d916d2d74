"""
Self-describing .npz container for trained models
"""
import io
import json
import logging
import zipfile
from pathlib import Path
from typing import Union

import numpy as np

from turnkan.data.preprocessing import Standardizer
from turnkan.models.factory import build_model
from turnkan.models.trained import TrainedModel
from turnkan.schemas.model import parse_model_config
from turnkan.utils.exceptions import DataFormatError, DataIOError, DatasetNotFoundError
from turnkan.utils.io import atomic_write_bytes

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def save_model(model: TrainedModel, path: Union[str, Path]) -> Path:
    """Store config, parameter vector and standardization; float64 values are kept bit-exact"""
    buffer = io.BytesIO()
    np.savez(
        buffer,
        format_version=np.array(FORMAT_VERSION),
        config=np.array(model.config.model_dump_json()),
        seed=np.array(model.seed),
        parameters=model.parameter_vector(),
        standardizer_mean=model.standardizer.mean,
        standardizer_scale=model.standardizer.scale,
        history=np.asarray(model.history, dtype=np.float64),
        train_seconds=np.array(model.train_seconds),
    )
    path = atomic_write_bytes(path, buffer.getvalue())
    logger.info(f"Saved {model.family} model ({model.num_parameters()} parameters) to {path}")
    return path


def load_model(path: Union[str, Path]) -> TrainedModel:
    """
    Rebuild a model written by save_model

    Raises:
        DatasetNotFoundError: The file does not exist
        DataFormatError: Unknown format version or missing entries
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetNotFoundError(f"Model file not found: {path}")
    try:
        with np.load(path, allow_pickle=False) as archive:
            entries = {name: archive[name] for name in archive.files}
    except (zipfile.BadZipFile, ValueError) as e:
        raise DataFormatError(f"{path} is not a model archive: {e}") from None
    except OSError as e:
        raise DataIOError(f"Cannot read {path}: {e}") from None

    version = int(entries.get("format_version", -1))
    if version != FORMAT_VERSION:
        raise DataFormatError(f"unsupported model format version {version} in {path}")
    try:
        config = parse_model_config(json.loads(str(entries["config"])))
        model = build_model(config, int(entries["seed"]))
        model.load_parameter_vector(entries["parameters"])
        model.standardizer = Standardizer(
            mean=entries["standardizer_mean"], scale=entries["standardizer_scale"]
        )
        model.history = entries["history"].tolist()
        model.train_seconds = float(entries["train_seconds"])
    except KeyError as e:
        raise DataFormatError(f"model archive {path} lacks entry {e}") from None
    return model
