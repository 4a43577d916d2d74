"""
Paired hypothesis harness over ten-division scores
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from turnkan.schemas.stats import Comparison, HarnessReport, PairedScores, TestResult
from turnkan.stats.paired import jzs_bayes_factor, paired_t_one_tailed, wilcoxon_one_tailed
from turnkan.utils.exceptions import HarnessError, NumericalError, StatisticalTestError

logger = logging.getLogger(__name__)

HP1_PAIRS: Tuple[Tuple[str, str], ...] = (("KAN", "MLP"), ("FKAN", "CNN"))
NO_DIFFERENCE = "no significant difference detected"
NO_EVIDENCE = "no evidence"


@dataclass(frozen=True)
class DivisionScores:
    """Macro-F1 of one trained model on each test division of one subject"""
    subject: str
    label: str
    scores: Tuple[float, ...]
    checksum: str

    @property
    def mean(self) -> float:
        return float(np.mean(self.scores))


def _verdict(result: TestResult, alpha: float) -> Tuple[bool, str]:
    if result.p_value < alpha:
        return True, f"{result.direction} (p = {result.p_value:.4g} < {alpha})"
    return False, NO_DIFFERENCE


def compare_divisions(a: DivisionScores, b: DivisionScores, alpha: float) -> Comparison:
    """
    One-sided Wilcoxon of a over b on the same folds

    Raises:
        HarnessError: The two score vectors come from different fold assignments
    """
    if a.checksum != b.checksum:
        raise HarnessError(
            f"fold assignments differ for {a.label} and {b.label} on subject {a.subject}"
        )
    pairs = PairedScores(a=list(a.scores), b=list(b.scores), label_a=a.label, label_b=b.label)
    comparison = Comparison(
        subject=a.subject,
        label_a=a.label,
        label_b=b.label,
        fold_checksum=a.checksum,
        mean_a=a.mean,
        mean_b=b.mean,
        verdict=NO_EVIDENCE,
    )
    try:
        result = wilcoxon_one_tailed(pairs)
    except StatisticalTestError as e:
        logger.warning(f"{a.subject}: {a.label} vs {b.label}: {e.message}")
        return comparison.model_copy(update={"verdict": f"{NO_EVIDENCE}: {e.message}"})
    significant, verdict = _verdict(result, alpha)
    return comparison.model_copy(update={"result": result, "significant": significant, "verdict": verdict})


def compare_subject_means(
    label_a: str, label_b: str, means_a: Sequence[float], means_b: Sequence[float], alpha: float
) -> Comparison:
    """Paired t-test with the one-sided Bayes factor over per-subject means"""
    pairs = PairedScores(a=list(means_a), b=list(means_b), label_a=label_a, label_b=label_b)
    comparison = Comparison(
        subject="all",
        label_a=label_a,
        label_b=label_b,
        mean_a=float(np.mean(means_a)),
        mean_b=float(np.mean(means_b)),
        verdict=NO_EVIDENCE,
    )
    try:
        result = paired_t_one_tailed(pairs)
    except StatisticalTestError as e:
        return comparison.model_copy(update={"verdict": f"{NO_EVIDENCE}: {e.message}"})
    try:
        result = result.model_copy(update={"bayes_factor": jzs_bayes_factor(pairs)})
    except NumericalError as e:
        logger.warning(f"Bayes factor for {label_a} vs {label_b} failed: {e.message}")
    significant, verdict = _verdict(result, alpha)
    return comparison.model_copy(update={"result": result, "significant": significant, "verdict": verdict})


def _across(
    pairs: List[Tuple[DivisionScores, DivisionScores]], alpha: float
) -> Optional[Comparison]:
    if len(pairs) < 2:
        return None
    label_a, label_b = pairs[0][0].label, pairs[0][1].label
    return compare_subject_means(
        label_a, label_b, [a.mean for a, _ in pairs], [b.mean for _, b in pairs], alpha
    )


def run_harness(
    hypothesis: str,
    pairs: Sequence[Tuple[DivisionScores, DivisionScores]],
    alpha: float,
) -> HarnessReport:
    """
    Per-subject Wilcoxon for every (A, B) pair and, for every label pair seen
    on two or more subjects, an across-subject t-test on the division means
    """
    per_subject = [compare_divisions(a, b, alpha) for a, b in pairs]
    grouped: Dict[Tuple[str, str], List[Tuple[DivisionScores, DivisionScores]]] = {}
    for a, b in pairs:
        grouped.setdefault((a.label, b.label), []).append((a, b))
    across = [c for c in (_across(group, alpha) for group in grouped.values()) if c is not None]
    return HarnessReport(
        hypothesis=hypothesis,
        significance_level=alpha,
        per_subject=per_subject,
        across_subjects=across,
    )


def hypothesis_one(scores: Dict[Tuple[str, str], DivisionScores], alpha: float) -> HarnessReport:
    """
    KAN over MLP and FKAN over CNN, per subject

    Args:
        scores: Division scores keyed by (subject, family)
    """
    subjects = sorted({subject for subject, _ in scores})
    pairs = [
        (scores[(subject, a)], scores[(subject, b)])
        for a, b in HP1_PAIRS
        for subject in subjects
        if (subject, a) in scores and (subject, b) in scores
    ]
    return run_harness("HP1", pairs, alpha)


def hypothesis_two(
    specific: Dict[Tuple[str, str], DivisionScores],
    pooled: Dict[Tuple[str, str], DivisionScores],
    alpha: float,
) -> HarnessReport:
    """
    Subject-specific over pooled training, per subject and family

    Args:
        specific: Division scores keyed by (subject, family)
        pooled: Division scores of the pooled model on each subject's folds
    """
    pairs = [(specific[key], pooled[key]) for key in sorted(specific) if key in pooled]
    return run_harness("HP2", pairs, alpha)
