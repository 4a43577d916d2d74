"""
CSV dataset and JSON profile files
"""
import json
import logging
import re
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import TypeAdapter, ValidationError

from turnkan.config import settings
from turnkan.data.labels import CHANNELS, LABEL_INDEX, LABEL_ORDER, Activity, Stiffness
from turnkan.data.trial import Trial, validate_label_grammar
from turnkan.schemas.profile import SubjectProfile
from turnkan.utils.exceptions import (
    DataFormatError,
    DataIOError,
    DatasetNotFoundError,
    configuration_error_from_validation,
)
from turnkan.utils.io import atomic_write_text

logger = logging.getLogger(__name__)

KEY_COLUMNS = ["subject", "activity", "stiffness", "trial"]
CSV_COLUMNS = KEY_COLUMNS + list(CHANNELS) + ["label"]
_PARSER_LINE = re.compile(r"line (\d+)")


def _first_bad(mask: Union[pd.Series, np.ndarray]) -> Optional[int]:
    hits = np.flatnonzero(np.asarray(mask, dtype=bool))
    return int(hits[0]) if hits.size else None


def _parse_enum(frame: pd.DataFrame, column: str, allowed: Sequence[str]) -> None:
    bad = _first_bad(~frame[column].isin(list(allowed)))
    if bad is not None:
        raise DataFormatError(f"unknown {column} {frame[column].iloc[bad]!r}", line=bad + 2)


def ingest_csv(path: Union[str, Path], validate_grammar: bool = True) -> List[Trial]:
    """
    Read one-sample-per-row CSV into trials

    Rows are grouped by (subject, activity, stiffness, trial) in order of first
    appearance. Line numbers in errors count the header as line 1.

    Raises:
        DatasetNotFoundError: The file does not exist
        DataFormatError: Bad header, malformed row, or unknown label token
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetNotFoundError(f"Dataset not found: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise DataFormatError("missing header row", line=1) from None
    except pd.errors.ParserError as e:
        match = _PARSER_LINE.search(str(e))
        raise DataFormatError(f"malformed row: {e}", line=int(match.group(1)) if match else None) from None
    except (OSError, UnicodeDecodeError) as e:
        raise DataIOError(f"cannot read {path}: {e}") from None

    if list(frame.columns) != CSV_COLUMNS:
        raise DataFormatError(f"header must be {','.join(CSV_COLUMNS)}", line=1)
    if frame.empty:
        return []

    bad = _first_bad(frame.isna().any(axis=1))
    if bad is not None:
        raise DataFormatError("row has missing fields", line=bad + 2)
    _parse_enum(frame, "activity", [a.value for a in Activity])
    _parse_enum(frame, "stiffness", [s.value for s in Stiffness])
    _parse_enum(frame, "label", list(LABEL_INDEX))

    values = frame[list(CHANNELS)].apply(pd.to_numeric, errors="coerce")
    bad = _first_bad(~np.isfinite(values.to_numpy(dtype=np.float64)).all(axis=1))
    if bad is not None:
        raise DataFormatError("channel value is not a finite number", line=bad + 2)
    numbers = pd.to_numeric(frame["trial"], errors="coerce")
    bad = _first_bad(numbers.isna() | (numbers != numbers.round()))
    if bad is not None:
        raise DataFormatError(f"trial number {frame['trial'].iloc[bad]!r} is not an integer", line=bad + 2)

    frame = frame.assign(trial=numbers.astype(np.int64))
    # str -> float64 through numpy parses with correct rounding
    signals = frame[list(CHANNELS)].to_numpy(dtype=str).astype(np.float64)
    labels = frame["label"].map(LABEL_INDEX).to_numpy(dtype=np.int64)
    codes, _ = pd.factorize(frame[KEY_COLUMNS].astype(str).agg("\x1f".join, axis=1))

    trials = []
    for code in range(int(codes.max()) + 1):
        rows = np.flatnonzero(codes == code)
        subject, activity, stiffness, number = frame[KEY_COLUMNS].iloc[rows[0]]
        trial = Trial(
            subject=subject,
            activity=Activity(activity),
            stiffness=Stiffness(stiffness),
            trial=int(number),
            signals=signals[rows],
            labels=labels[rows],
        )
        if validate_grammar:
            validate_label_grammar(trial)
        trials.append(trial)
    logger.info(f"Ingested {len(trials)} trials ({len(frame)} samples) from {path}")
    return trials


def export_csv(
    trials: Sequence[Trial], path: Union[str, Path], significant_digits: Optional[int] = None
) -> Path:
    """Write trials one sample per row; 17 significant digits round-trip exactly"""
    digits = significant_digits or settings.csv_significant_digits
    frames = []
    for trial in trials:
        part = pd.DataFrame(trial.signals, columns=list(CHANNELS))
        part.insert(0, "trial", trial.trial)
        part.insert(0, "stiffness", trial.stiffness.value)
        part.insert(0, "activity", trial.activity.value)
        part.insert(0, "subject", trial.subject)
        part["label"] = [LABEL_ORDER[i].value for i in trial.labels]
        frames.append(part)
    frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=CSV_COLUMNS)
    content = frame.to_csv(index=False, float_format=f"%.{digits}g", lineterminator="\n")
    path = atomic_write_text(path, content)
    logger.info(f"Exported {len(trials)} trials to {path}")
    return path


_PROFILES = TypeAdapter(List[SubjectProfile])


def load_profiles(path: Union[str, Path]) -> List[SubjectProfile]:
    """Read a JSON list of generator profiles"""
    path = Path(path)
    if not path.is_file():
        raise DatasetNotFoundError(f"Profile file not found: {path}")
    try:
        return _PROFILES.validate_json(path.read_bytes())
    except ValidationError as e:
        raise configuration_error_from_validation(e) from None


def save_profiles(profiles: Sequence[SubjectProfile], path: Union[str, Path]) -> Path:
    payload = [profile.model_dump(mode="json") for profile in profiles]
    return atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
