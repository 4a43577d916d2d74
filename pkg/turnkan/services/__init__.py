from turnkan.services.benchmark import BenchmarkService, LatencyReport, benchmark_inference, benchmark_service
from turnkan.services.evaluation import EvaluationService, evaluation_service
from turnkan.services.experiment import ExperimentService, experiment_service, run
from turnkan.services.reports import emit_reports
from turnkan.services.training import TrainingService, train, training_service

__all__ = [
    "BenchmarkService",
    "EvaluationService",
    "ExperimentService",
    "LatencyReport",
    "TrainingService",
    "benchmark_inference",
    "benchmark_service",
    "emit_reports",
    "evaluation_service",
    "experiment_service",
    "run",
    "train",
    "training_service",
]
