"""
FastAPI application entry point
"""
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from turnkan.api.v1 import predict
from turnkan.config import settings
from turnkan.utils.exceptions import TurnKANException, error_body, status_code_from_error
from turnkan.utils.logger import get_logger, setup_logging

setup_logging()
logger = get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Log which model the service will load on first request"""
    logger.info(f"Starting {settings.app_name} inference API (model: {settings.model_path or 'none'})")
    yield
    logger.info("Application shutdown")


app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="Turn-intent classification of shank IMU windows",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.allowed_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(predict.router, prefix="/api/v1", tags=["Inference"])


@app.exception_handler(TurnKANException)
async def turnkan_exception_handler(request: Request, exc: TurnKANException) -> JSONResponse:
    status_code = status_code_from_error(exc)
    if status_code >= 500:
        logger.error(f"{request.method} {request.url.path} failed: {exc.message}")
    return JSONResponse(status_code=status_code, content=error_body(exc))


@app.get("/")
async def index() -> dict:
    endpoints = sorted(route.path for route in app.routes if route.path.startswith("/api/"))
    return {"service": settings.app_name, "version": settings.app_version, "endpoints": endpoints}


@app.get("/health")
async def health() -> dict:
    """Liveness plus whether a model path is set; the model itself loads lazily"""
    return {"status": "healthy", "model_configured": settings.model_path is not None}
