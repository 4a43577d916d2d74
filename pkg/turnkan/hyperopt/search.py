"""
Bayesian optimization loop with resumable JSON-lines history
"""
import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence, Union

import numpy as np
from pydantic import ValidationError
from scipy.linalg import LinAlgError
from scipy.stats import qmc

from turnkan.config import settings
from turnkan.hyperopt.gp import GaussianProcess, expected_improvement
from turnkan.hyperopt.space import SearchSpace
from turnkan.schemas.hyperopt import TrialRecord
from turnkan.schemas.model import ModelConfig
from turnkan.utils.exceptions import ConfigurationError, DataFormatError, DataIOError

logger = logging.getLogger(__name__)

Objective = Callable[[Any], float]


@dataclass
class OptimizationResult:
    best: TrialRecord
    history: List[TrialRecord]

    def best_so_far(self) -> List[float]:
        return np.maximum.accumulate([r.objective for r in self.history]).tolist()


def _initial_point(space: SearchSpace, index: int, n_initial: int, seed: int) -> np.ndarray:
    sampler = qmc.LatinHypercube(d=space.n_dims, seed=seed)
    design = sampler.random(n_initial)
    return space.sample(design[index])


def suggest(
    history: Sequence[TrialRecord],
    space: SearchSpace,
    seed: int,
    n_initial: Optional[int] = None,
    n_candidates: Optional[int] = None,
    noise: Optional[float] = None,
    xi: Optional[float] = None,
) -> np.ndarray:
    """
    Next point to evaluate

    The first ``n_initial`` suggestions walk a seeded Latin hypercube. After
    that a GP is fitted to the history and the candidate with the largest
    expected improvement among ``n_candidates`` seeded lattice points wins.
    A history with identical objectives gives a seeded random point.
    """
    n_initial = settings.hyperopt_initial_points if n_initial is None else n_initial
    n_candidates = settings.hyperopt_candidates if n_candidates is None else n_candidates
    noise = settings.gp_noise if noise is None else noise
    xi = settings.ei_xi if xi is None else xi
    rng = np.random.default_rng([seed, len(history)])

    if len(history) < n_initial:
        return _initial_point(space, len(history), n_initial, seed)
    y = np.array([r.objective for r in history])
    if np.ptp(y) == 0.0:
        logger.debug("Degenerate history, suggesting a random point")
        return space.random_point(rng)

    x = space.to_unit(np.array([r.point for r in history]))
    try:
        gp = GaussianProcess(noise=noise).fit(x, y)
    except LinAlgError:
        logger.warning("Surrogate fit failed, suggesting a random point")
        return space.random_point(rng)
    candidates = np.array([space.random_point(rng) for _ in range(n_candidates)])
    mean, std = gp.predict(space.to_unit(candidates))
    ei = expected_improvement(mean, std, float(y.max()), xi)
    return candidates[int(np.argmax(ei))]


def _describe(obj: Any) -> dict:
    if isinstance(obj, ModelConfig):
        return obj.model_dump(mode="json")
    return dict(obj)


def load_history(path: Union[str, Path]) -> List[TrialRecord]:
    """Records of an earlier run, one JSON object per line"""
    path = Path(path)
    if not path.is_file():
        return []
    records = []
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(TrialRecord.model_validate_json(line))
        except ValidationError as e:
            raise DataFormatError(f"invalid history record: {e.errors()[0]['msg']}", line=number) from None
    return records


def _check_resumable(history: Sequence[TrialRecord], space: SearchSpace, seed: int) -> None:
    for record in history:
        if record.seed != seed:
            raise ConfigurationError(f"history was recorded with seed {record.seed}, not {seed}", "seed")
        if (record.space or space.name) != space.name or len(record.point) != space.n_coords:
            raise ConfigurationError(f"history does not belong to the {space.name} search", "space")


def _append(path: Path, record: TrialRecord) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a", encoding="utf-8") as handle:
            handle.write(record.model_dump_json() + "\n")
    except OSError as e:
        raise DataIOError(f"Cannot append to {path}: {e}") from e


def _evaluate(objective: Objective, candidate: Any) -> tuple:
    started = time.perf_counter()
    error = None
    try:
        score = float(objective(candidate))
        if not np.isfinite(score):
            raise ValueError(f"objective returned {score}")
    except Exception as e:
        logger.warning(f"Objective failed for {candidate}: {e}")
        score, error = 0.0, f"{type(e).__name__}: {e}"
    return float(np.clip(score, 0.0, 1.0)), time.perf_counter() - started, error


def _run(
    objective: Objective,
    space: SearchSpace,
    budget: int,
    seed: int,
    propose: Callable[[List[TrialRecord]], np.ndarray],
    history_path: Optional[Union[str, Path]],
) -> OptimizationResult:
    if budget < 1:
        raise ConfigurationError("budget must be at least 1", "budget")
    history = load_history(history_path) if history_path else []
    if history:
        _check_resumable(history, space, seed)
        logger.info(f"Resuming {space.name} search from {len(history)} recorded trials")
    history = history[:budget]

    while len(history) < budget:
        candidate = space.decode(propose(history))
        point = space.encode(candidate)
        score, seconds, error = _evaluate(objective, candidate)
        record = TrialRecord(
            index=len(history),
            config=_describe(candidate),
            point=point.tolist(),
            objective=score,
            seconds=seconds,
            seed=seed,
            space=space.name,
            error=error,
        )
        history.append(record)
        if history_path:
            _append(Path(history_path), record)
        logger.info(f"{space.name} trial {record.index}: objective {score:.4f} ({seconds:.1f}s)")

    best = max(history, key=lambda r: (r.objective, -r.index))
    return OptimizationResult(best=best, history=history)


def optimize(
    objective: Objective,
    space: SearchSpace,
    budget: Optional[int] = None,
    seed: int = 0,
    history_path: Optional[Union[str, Path]] = None,
) -> OptimizationResult:
    """
    Maximize ``objective`` over ``space``

    A raising objective scores 0 and the search continues. With
    ``history_path`` every record is appended as it completes and an existing
    file is resumed.

    Raises:
        ConfigurationError: The recorded history has another seed or space

    Returns:
        Best record (earliest on ties) and the full history of ``budget`` trials
    """
    budget = settings.hyperopt_budget if budget is None else budget
    return _run(objective, space, budget, seed, lambda h: suggest(h, space, seed), history_path)


def random_search(
    objective: Objective,
    space: SearchSpace,
    budget: Optional[int] = None,
    seed: int = 0,
    history_path: Optional[Union[str, Path]] = None,
) -> OptimizationResult:
    """Seeded uniform sampling with the same bookkeeping as ``optimize``"""
    budget = settings.hyperopt_budget if budget is None else budget
    return _run(
        objective,
        space,
        budget,
        seed,
        lambda h: space.random_point(np.random.default_rng([seed, len(h)])),
        history_path,
    )
