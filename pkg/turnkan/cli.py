"""
Command-line experiment driver
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from pydantic import ValidationError

from turnkan.config import settings
from turnkan.schemas.experiment import ExperimentConfig, ExperimentMode, RunArtifact
from turnkan.services.experiment import run
from turnkan.services.reports import emit_reports
from turnkan.utils.exceptions import (
    EXIT_OK,
    ConfigurationError,
    DataIOError,
    TurnKANException,
    configuration_error_from_validation,
    exit_code_from_error,
)
from turnkan.utils.logger import attach_run_log, detach_run_log, setup_logging

logger = logging.getLogger(__name__)

RUN_LOG = "run.log"


def parse_assignment(text: str) -> tuple:
    """Split ``key=value``; the value is read as JSON when it parses, else kept as text"""
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise ConfigurationError(f"expected key=value, got {text!r}", "set")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def _set_nested(data: Dict[str, Any], dotted: str, value: Any) -> None:
    keys = dotted.split(".")
    for key in keys[:-1]:
        data = data.setdefault(key, {})
    data[keys[-1]] = value


def load_config_file(path: Path) -> Dict[str, Any]:
    try:
        content = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataIOError(f"Config file not found: {path}") from None
    except OSError as e:
        raise DataIOError(f"Cannot read {path}: {e}") from None
    try:
        data = json.loads(content)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path} is not valid JSON: {e}", "config") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path} must hold a JSON object", "config")
    return data


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Merge the config file, dedicated flags and ``--set`` overrides, in that order

    Raises:
        ConfigurationError: Naming the first invalid field
    """
    mode = ExperimentMode(args.command)
    data: Dict[str, Any] = load_config_file(Path(args.config)) if args.config else {}
    data["mode"] = mode.value
    flags = {
        "dataset": args.dataset,
        "profiles": args.profiles,
        "subject": args.subject,
        "families": args.family,
        "seed": args.seed,
        "output_dir": args.output,
        "budget": args.budget,
        "window_size": args.window_size,
        "epochs": args.epochs,
        "model_path": args.model_path,
        "repetitions": args.repetitions,
    }
    data.update({key: value for key, value in flags.items() if value is not None})
    if args.no_smoothing:
        data["smoothing"] = False
    for assignment in args.set or []:
        key, value = parse_assignment(assignment)
        _set_nested(data, key, value)
    data.setdefault("output_dir", str(settings.output_dir / mode.value))
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise configuration_error_from_validation(e) from None


def print_summary(artifact: RunArtifact) -> None:
    for record in artifact.proportions:
        print(
            f"{record.subject} {record.side:5s} W={record.window_size}: "
            f"SW {100 * record.SW:5.1f}%  ST {100 * record.ST:5.1f}%  SP {100 * record.SP:5.1f}%"
        )
    for report in sorted(artifact.evaluations, key=lambda r: (r.subject, r.model)):
        print(f"{report.subject} {report.model:12s} macro-F1 {100 * report.macro_f1:6.2f}")
    for harness in artifact.stats:
        for comparison in harness.per_subject + harness.across_subjects:
            print(
                f"{harness.hypothesis} {comparison.subject} "
                f"{comparison.label_a} > {comparison.label_b}: {comparison.verdict}"
            )
    for timing in artifact.timings:
        if timing.inference_seconds is not None:
            print(f"{timing.subject} {timing.model:12s} {1e3 * timing.inference_seconds:.3f} ms per window")
    print(f"✅ Wrote {len(artifact.files)} files to {artifact.config.output_dir}")


def run_experiment(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    handler = attach_run_log(config.output_dir / RUN_LOG)
    try:
        artifact = run(config)
        emit_reports(artifact, config.output_dir)
    finally:
        detach_run_log(handler)
    print_summary(artifact)
    return EXIT_OK


def serve(args: argparse.Namespace) -> int:
    import uvicorn

    if args.model_path:
        settings.model_path = Path(args.model_path)
    from turnkan.main import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", "-c", help="JSON experiment config file")
    parser.add_argument("--dataset", "-d", help="CSV dataset")
    parser.add_argument("--profiles", help="JSON generator profiles (generate)")
    parser.add_argument("--subject", "-s", help="Subject id, or 'pooled'")
    parser.add_argument(
        "--family", "-f", action="append", choices=["MLP", "KAN", "CNN", "FKAN"],
        help="Model family; repeat for several",
    )
    parser.add_argument("--seed", type=int, help="Run seed")
    parser.add_argument("--output", "-o", help="Run directory")
    parser.add_argument("--budget", type=int, help="Search evaluations (hyperopt)")
    parser.add_argument("--window-size", type=int, help="Window size for every model")
    parser.add_argument("--epochs", type=int, help="Training epochs")
    parser.add_argument("--model-path", help="Saved model (evaluate, bench)")
    parser.add_argument("--repetitions", type=int, help="Latency repetitions (bench)")
    parser.add_argument("--no-smoothing", action="store_true", help="Skip the moving-average filter")
    parser.add_argument(
        "--set", action="append", metavar="KEY=VALUE",
        help="Override any config key, dotted for nesting (models.KAN.grid_size=5)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="turnkan",
        description="Train and compare KAN, FKAN, MLP and CNN turn-intent classifiers",
    )
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    commands = parser.add_subparsers(dest="command", required=True)
    help_text = {
        ExperimentMode.GENERATE: "Generate a synthetic dataset",
        ExperimentMode.TRAIN: "Train and evaluate models",
        ExperimentMode.HYPEROPT: "Bayesian search over a model family",
        ExperimentMode.EVALUATE: "Evaluate a saved model",
        ExperimentMode.COMPARE_HP1: "KAN vs MLP and FKAN vs CNN per subject",
        ExperimentMode.COMPARE_HP2: "Subject-specific vs pooled training",
        ExperimentMode.BENCH: "Time single-window inference",
    }
    for mode in ExperimentMode:
        _add_run_arguments(commands.add_parser(mode.value, help=help_text[mode]))

    server = commands.add_parser("serve", help="Serve a saved model over HTTP")
    server.add_argument("--model-path", help="Saved model, overrides TURNKAN_MODEL_PATH")
    server.add_argument("--host", default="127.0.0.1")
    server.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    try:
        setup_logging(args.log_level)
        if args.command == "serve":
            return serve(args)
        return run_experiment(args)
    except TurnKANException as e:
        logger.error(f"{args.command} failed: {e.message}")
        print(f"❌ {e.message}", file=sys.stderr)
        return exit_code_from_error(e)


if __name__ == "__main__":
    sys.exit(main())
