"""
Tests for the inference API
"""
import numpy as np
import pytest
from fastapi.testclient import TestClient

from turnkan.config import settings
from turnkan.dependencies.model import get_model
from turnkan.main import app
from turnkan.models import build_model, preset_config, save_model
from turnkan.schemas.model import ModelFamily
from turnkan.schemas.response import ErrorResponse


@pytest.fixture
def model():
    return build_model(preset_config(ModelFamily.MLP, 10), seed=0)


@pytest.fixture
def client(model):
    app.dependency_overrides[get_model] = lambda: model
    yield TestClient(app)
    app.dependency_overrides.clear()


def test_health():
    response = TestClient(app).get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_index_lists_inference_endpoints():
    response = TestClient(app).get("/")
    assert response.status_code == 200
    assert response.json()["endpoints"] == ["/api/v1/model", "/api/v1/predict"]


def test_missing_model_is_not_found(monkeypatch):
    monkeypatch.setattr(settings, "model_path", None)
    response = TestClient(app).get("/api/v1/model")
    assert response.status_code == 404
    assert response.json()["error"]["code"] == "DATASET_NOT_FOUND"
    assert ErrorResponse.model_validate(response.json()).success is False


def test_error_envelope_is_documented():
    schema = TestClient(app).get("/openapi.json").json()
    responses = schema["paths"]["/api/v1/predict"]["post"]["responses"]
    for status_code in ("404", "422", "503"):
        reference = responses[status_code]["content"]["application/json"]["schema"]["$ref"]
        assert reference.endswith("/ErrorResponse")


def test_model_info(client):
    response = client.get("/api/v1/model")
    assert response.status_code == 200
    data = response.json()["data"]
    assert data["family"] == "MLP"
    assert data["window_size"] == 10
    assert data["labels"] == ["SW", "ST", "SP"]


def test_prediction_is_a_distribution(client, model, rng):
    window = rng.normal(size=(10, 6))
    response = client.post("/api/v1/predict", json={"window": window.tolist()})
    assert response.status_code == 200
    data = response.json()["data"]
    probabilities = data["probabilities"]
    assert sum(probabilities.values()) == pytest.approx(1.0, abs=1e-9)
    assert data["label"] == max(probabilities, key=probabilities.get)
    np.testing.assert_allclose(list(probabilities.values()), model.predict(window), atol=1e-12)


def test_wrong_window_length_is_rejected(client, rng):
    response = client.post("/api/v1/predict", json={"window": rng.normal(size=(5, 6)).tolist()})
    assert response.status_code == 422
    assert response.json()["error"]["code"] == "SHAPE_ERROR"


def test_wrong_channel_count_is_rejected(client, rng):
    window = rng.normal(size=(10, 6)).tolist()
    window[3] = window[3][:5]
    response = client.post("/api/v1/predict", json={"window": window})
    assert response.status_code == 422


def test_model_loads_from_settings(monkeypatch, tmp_path, model, rng):
    path = save_model(model, tmp_path / "served.npz")
    monkeypatch.setattr(settings, "model_path", path)
    window = rng.normal(size=(10, 6))
    response = TestClient(app).post("/api/v1/predict", json={"window": window.tolist()})
    assert response.status_code == 200
    np.testing.assert_allclose(
        list(response.json()["data"]["probabilities"].values()), model.predict(window), atol=1e-12
    )


def test_unreadable_model_is_unavailable(monkeypatch, tmp_path):
    path = tmp_path / "broken.npz"
    path.write_bytes(b"not a model")
    monkeypatch.setattr(settings, "model_path", path)
    response = TestClient(app).get("/api/v1/model")
    assert response.status_code == 503
    assert response.json()["success"] is False
    assert response.json()["error"]["code"] == "DATA_FORMAT_ERROR"
