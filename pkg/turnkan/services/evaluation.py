"""
Test-set scoring with ten paired divisions
"""
import logging
from typing import Optional, Sequence

from turnkan.data.splits import Divisions, ten_divisions
from turnkan.data.trial import WindowSet
from turnkan.metrics.classification import confusion, macro_f1, macro_f1_score, majority_baseline, per_class_scores
from turnkan.models.trained import TrainedModel
from turnkan.schemas.report import EvalReport
from turnkan.services.base import BaseService
from turnkan.utils.exceptions import InsufficientDataError

logger = logging.getLogger(__name__)


class EvaluationService(BaseService):
    """Service scoring trained models on held-out windows"""

    def evaluate(
        self,
        model: TrainedModel,
        windows: WindowSet,
        subject: str,
        label: Optional[str] = None,
        divisions: Optional[Divisions] = None,
        seed: int = 0,
        train_labels: Optional[Sequence[int]] = None,
    ) -> EvalReport:
        """
        Score a model on one subject's test windows

        Args:
            model: Trained model
            windows: Test windows of ``subject``
            subject: Subject id for the report
            label: Model label, the family name by default
            divisions: Fold assignment shared with compared models; built from ``seed`` when omitted
            seed: Division seed
            train_labels: Training labels for the majority baseline

        Returns:
            Overall scores, confusion matrix and one macro-F1 per division

        Raises:
            InsufficientDataError: No test windows, or a class too small for ten divisions
        """
        if len(windows) == 0:
            raise InsufficientDataError(f"no test windows for subject {subject}")
        divisions = divisions or ten_divisions(windows, seed)
        predicted = model.predict_labels(windows.inputs)
        cm = confusion(windows.labels, predicted)
        scores = per_class_scores(cm)
        division_scores = [
            macro_f1_score(windows.labels[fold], predicted[fold]) for fold in divisions.folds
        ]
        report = EvalReport(
            subject=subject,
            model=label or model.family,
            family=model.config.family,
            window_size=model.config.window_size,
            n_windows=len(windows),
            macro_f1=macro_f1(cm),
            precision=scores.precision.tolist(),
            recall=scores.recall.tolist(),
            f1=scores.f1.tolist(),
            confusion=cm.counts.tolist(),
            confusion_normalized=cm.normalized().tolist(),
            division_scores=division_scores,
            fold_checksum=divisions.checksum,
            majority_baseline=(
                majority_baseline(train_labels, windows.labels) if train_labels is not None else None
            ),
        )
        logger.info(f"{subject} {report.model}: macro-F1 {report.macro_f1:.4f} on {len(windows)} windows")
        return report


# Global service instance
evaluation_service = EvaluationService()
