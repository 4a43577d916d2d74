"""
Inference endpoints
"""
from typing import Any

import numpy as np
from fastapi import APIRouter, Depends

from turnkan.dependencies.model import get_model
from turnkan.models.trained import TrainedModel
from turnkan.schemas.response import DataResponse, ErrorResponse, ModelInfo, PredictRequest, Prediction

router = APIRouter()

MODEL_ERRORS = {
    404: {"model": ErrorResponse, "description": "No model configured or the file is missing"},
    503: {"model": ErrorResponse, "description": "The model file cannot be read"},
}


@router.get("/model", response_model=DataResponse[ModelInfo], responses=MODEL_ERRORS)
async def get_model_info(model: TrainedModel = Depends(get_model)) -> Any:
    """
    Get the served model
    Family, window size and configuration of the loaded classifier
    """
    info = ModelInfo(
        family=model.family,
        window_size=model.config.window_size,
        num_parameters=model.num_parameters(),
        seed=model.seed,
        labels=[label.value for label in model.label_order],
        config=model.config.summary(),
    )
    return DataResponse(data=info, message="Model retrieved successfully")


@router.post(
    "/predict",
    response_model=DataResponse[Prediction],
    responses={**MODEL_ERRORS, 422: {"model": ErrorResponse, "description": "Window of the wrong shape"}},
)
async def predict(request: PredictRequest, model: TrainedModel = Depends(get_model)) -> Any:
    """
    Classify one window
    The window holds window_size samples of the six IMU channels, oldest first
    """
    probabilities = model.predict(np.asarray(request.window, dtype=np.float64))
    labels = [label.value for label in model.label_order]
    prediction = Prediction(
        label=labels[int(np.argmax(probabilities))],
        probabilities={label: float(p) for label, p in zip(labels, probabilities)},
    )
    return DataResponse(data=prediction, message="Window classified")
