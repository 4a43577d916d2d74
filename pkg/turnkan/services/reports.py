"""
Run directory rendering
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

import pandas as pd

from turnkan.data.csvio import export_csv, save_profiles
from turnkan.data.labels import LABEL_ORDER
from turnkan.models.serialization import save_model
from turnkan.schemas.experiment import RunArtifact
from turnkan.schemas.report import EvalReport
from turnkan.utils.io import atomic_write_text

logger = logging.getLogger(__name__)

# scores are reported in percent
PERCENT = 100.0
LABELS = [label.value for label in LABEL_ORDER]


def _json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def metrics_payload(evaluations: List[EvalReport]) -> Dict[str, Any]:
    rows = []
    for report in sorted(evaluations, key=lambda r: (r.subject, r.model)):
        rows.append(
            {
                "subject": report.subject,
                "model": report.model,
                "family": report.family.value,
                "window_size": report.window_size,
                "n_windows": report.n_windows,
                "macro_f1": PERCENT * report.macro_f1,
                "division_mean": PERCENT * report.division_mean,
                "majority_baseline": (
                    None if report.majority_baseline is None else PERCENT * report.majority_baseline
                ),
                "per_class": {
                    label: {
                        "precision": PERCENT * report.precision[i],
                        "recall": PERCENT * report.recall[i],
                        "f1": PERCENT * report.f1[i],
                    }
                    for i, label in enumerate(LABELS)
                },
            }
        )
    return {"units": "percent", "models": rows}


def confusion_frame(evaluations: List[EvalReport]) -> pd.DataFrame:
    rows = []
    for report in sorted(evaluations, key=lambda r: (r.subject, r.model)):
        for kind, matrix in (("raw", report.confusion), ("normalized", report.confusion_normalized)):
            for i, true_label in enumerate(LABELS):
                row = {"subject": report.subject, "model": report.model, "kind": kind, "true": true_label}
                row.update(zip(LABELS, matrix[i]))
                rows.append(row)
    return pd.DataFrame(rows, columns=["subject", "model", "kind", "true"] + LABELS)


def divisions_frame(evaluations: List[EvalReport]) -> pd.DataFrame:
    rows = [
        {
            "subject": report.subject,
            "model": report.model,
            "division": index,
            "macro_f1": PERCENT * score,
            "fold_checksum": report.fold_checksum,
        }
        for report in sorted(evaluations, key=lambda r: (r.subject, r.model))
        for index, score in enumerate(report.division_scores)
    ]
    return pd.DataFrame(rows, columns=["subject", "model", "division", "macro_f1", "fold_checksum"])


def emit_reports(artifact: RunArtifact, directory: Union[str, Path]) -> List[Path]:
    """
    Write every report the artifact has content for

    Files: config.json always; dataset.csv, profiles.json and proportions.csv
    for generated data; metrics.json, confusion.csv and divisions.csv for
    evaluations; stats.json for hypothesis tests; timing.csv; best_config.json
    for searches; models/<subject>-<label>.npz per trained model.

    Raises:
        DataIOError: The directory or a file cannot be written
    """
    directory = Path(directory)
    written: List[Path] = []
    config = artifact.config

    written.append(
        atomic_write_text(
            directory / "config.json",
            _json(
                {
                    "experiment": config.model_dump(mode="json"),
                    "models": {key: c.model_dump(mode="json") for key, c in artifact.model_configs.items()},
                    "seed": config.seed,
                }
            ),
        )
    )

    if artifact.trials:
        written.append(export_csv(artifact.trials, directory / "dataset.csv"))
        written.append(save_profiles(artifact.profiles, directory / "profiles.json"))
    if artifact.proportions:
        frame = pd.DataFrame([p.model_dump() for p in artifact.proportions])
        written.append(atomic_write_text(directory / "proportions.csv", _csv(frame)))

    if artifact.evaluations:
        written.append(atomic_write_text(directory / "metrics.json", _json(metrics_payload(artifact.evaluations))))
        written.append(atomic_write_text(directory / "confusion.csv", _csv(confusion_frame(artifact.evaluations))))
        written.append(atomic_write_text(directory / "divisions.csv", _csv(divisions_frame(artifact.evaluations))))

    if artifact.stats:
        payload = {"reports": [report.model_dump(mode="json") for report in artifact.stats]}
        written.append(atomic_write_text(directory / "stats.json", _json(payload)))

    if artifact.timings:
        frame = pd.DataFrame([t.model_dump(mode="json") for t in artifact.timings])
        written.append(atomic_write_text(directory / "timing.csv", _csv(frame)))

    if artifact.history:
        best = max(artifact.history, key=lambda r: (r.objective, -r.index))
        written.append(atomic_write_text(directory / "best_config.json", _json(best.model_dump(mode="json"))))

    for key, model in artifact.models.items():
        subject, label = key.split("/", 1)
        written.append(save_model(model, directory / "models" / f"{subject}-{label}.npz"))

    artifact.files = written
    logger.info(f"Wrote {len(written)} files to {directory}")
    return written
