"""
Tests for the paired tests and the hypothesis harness
"""
import itertools
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import integrate
from scipy import stats as scipy_stats

from turnkan.schemas.stats import PairedScores
from turnkan.stats import (
    DivisionScores,
    compare_divisions,
    compare_subject_means,
    hypothesis_one,
    hypothesis_two,
    jzs_bayes_factor_from_t,
    paired_t_one_tailed,
    signed_rank_counts,
    wilcoxon_one_tailed,
)
from turnkan.stats.harness import NO_DIFFERENCE
from turnkan.stats.paired import DEFAULT_CAUCHY_SCALE
from turnkan.utils.exceptions import HarnessError, StatisticalTestError


def pairs_from_steps(steps, denominator: int = 16) -> PairedScores:
    """Pairs whose differences are the exact dyadic values steps / denominator"""
    steps = np.asarray(steps, dtype=float)
    return PairedScores(a=list(0.5 + steps / denominator), b=[0.5] * steps.size)


def reversed_pairs(pairs: PairedScores) -> PairedScores:
    return PairedScores(a=pairs.b, b=pairs.a, label_a=pairs.label_b, label_b=pairs.label_a)


def enumerated_p(d: np.ndarray) -> Fraction:
    """P(W+ >= observed) by listing every sign assignment"""
    d = d[d != 0]
    ranks = scipy_stats.rankdata(np.abs(d))
    observed = ranks[d > 0].sum()
    hits = sum(
        1 for signs in itertools.product((0, 1), repeat=d.size)
        if ranks[np.array(signs, dtype=bool)].sum() >= observed - 1e-9
    )
    return Fraction(hits, 2 ** d.size)


def test_all_positive_five_pairs():
    result = wilcoxon_one_tailed(pairs_from_steps([1, 2, 3, 4, 5]))
    assert result.p_value == pytest.approx(1 / 32, abs=1e-15)
    assert result.n == 5
    assert result.statistic == 15.0


def test_all_positive_ten_pairs():
    result = wilcoxon_one_tailed(pairs_from_steps(range(1, 11), denominator=32))
    assert result.p_value == pytest.approx(1 / 1024, abs=1e-15)


def test_decimal_score_differences_tie():
    pairs = PairedScores(a=[0.3, 0.7, 0.9, 0.5, 0.6, 0.2], b=[0.2, 0.6, 0.8, 0.4, 0.7, 0.1])
    result = wilcoxon_one_tailed(pairs)
    assert result.statistic == 17.5
    assert result.p_value == pytest.approx(7 / 64, abs=1e-15)


def test_tied_vector_matches_enumeration():
    steps = np.array([3, 1, -2, 4, -1, 2, 5, -3, 1, 2])
    result = wilcoxon_one_tailed(pairs_from_steps(steps))
    assert result.p_value == pytest.approx(float(enumerated_p(steps)), abs=1e-15)


def test_random_vectors_match_enumeration(rng):
    for _ in range(100):
        size = int(rng.integers(5, 13))
        steps = rng.choice([-4, -3, -2, -1, 1, 2, 3, 4], size=size)
        zeros = np.zeros(int(rng.integers(0, 3)))
        steps = rng.permutation(np.concatenate([steps, zeros]))
        result = wilcoxon_one_tailed(pairs_from_steps(steps))
        assert result.p_value == pytest.approx(float(enumerated_p(steps)), abs=1e-15)
        assert result.n == size


def test_swapping_conditions_gives_the_other_tail(rng):
    for _ in range(20):
        steps = rng.choice([-3, -2, -1, 1, 2, 3], size=8)
        pairs = pairs_from_steps(steps)
        forward = wilcoxon_one_tailed(pairs)
        backward = wilcoxon_one_tailed(reversed_pairs(pairs))
        doubled = np.rint(2 * scipy_stats.rankdata(np.abs(steps))).astype(np.int64)
        at_observed = signed_rank_counts(doubled)[int(round(2 * forward.statistic))] / 2 ** 8
        assert forward.p_value + backward.p_value == pytest.approx(1 + at_observed, abs=1e-12)
        assert backward.direction == "B > A"


def test_rank_preserving_transform_keeps_p(rng):
    steps = rng.choice([-7, -5, -2, -1, 1, 3, 4, 6], size=10)
    cubed = np.sign(steps) * np.abs(steps) ** 3
    assert (
        wilcoxon_one_tailed(pairs_from_steps(steps)).p_value
        == wilcoxon_one_tailed(pairs_from_steps(cubed, denominator=1024)).p_value
    )


def test_null_counts_cover_every_assignment():
    doubled = np.array([2, 4, 6, 8])
    counts = signed_rank_counts(doubled)
    assert counts.sum() == 16
    assert counts[0] == counts[20] == 1


def test_wilcoxon_rejects_degenerate_inputs():
    with pytest.raises(StatisticalTestError):
        wilcoxon_one_tailed(pairs_from_steps([0, 0, 0, 0, 0, 0]))
    with pytest.raises(StatisticalTestError):
        wilcoxon_one_tailed(pairs_from_steps([1, 2, 0, 0, 3, 4]))


def test_paired_scores_validation():
    with pytest.raises(ValidationError):
        PairedScores(a=[0.5, 0.6], b=[0.5])
    with pytest.raises(ValidationError):
        PairedScores(a=[0.5], b=[0.5])
    with pytest.raises(ValidationError):
        PairedScores(a=[0.5, 1.2], b=[0.5, 0.5])


def test_symmetric_differences_give_half():
    result = paired_t_one_tailed(pairs_from_steps([1, -1, 2, -2]))
    assert result.statistic == 0.0
    assert result.p_value == pytest.approx(0.5)


def test_t_statistic_and_p():
    pairs = PairedScores(a=[0.52, 0.53, 0.51, 0.54, 0.52], b=[0.5] * 5)
    result = paired_t_one_tailed(pairs)
    assert result.statistic == pytest.approx(4.709, abs=1e-3)
    assert result.p_value == pytest.approx(0.0046, abs=1e-3)
    reference = scipy_stats.ttest_rel(pairs.a, pairs.b, alternative="greater")
    assert result.p_value == pytest.approx(reference.pvalue, rel=1e-9)


def test_wrong_direction_has_large_p():
    result = paired_t_one_tailed(pairs_from_steps([-1, -2, -3, -1, -2]))
    assert result.p_value > 0.5


def test_opposite_differences_have_complementary_p(rng):
    for _ in range(20):
        steps = rng.normal(size=6)
        forward = paired_t_one_tailed(pairs_from_steps(steps, denominator=8))
        backward = paired_t_one_tailed(reversed_pairs(pairs_from_steps(steps, denominator=8)))
        assert forward.p_value + backward.p_value == pytest.approx(1.0, abs=1e-12)


def test_equal_differences_are_degenerate():
    with pytest.raises(StatisticalTestError) as exc:
        paired_t_one_tailed(pairs_from_steps([1, 1, 1, 1]))
    assert "degenerate differences" in exc.value.message


def test_bayes_factor_favours_null_at_zero():
    assert jzs_bayes_factor_from_t(0.0, 5) < 1.0


def test_bayes_factor_increases_with_t():
    values = [jzs_bayes_factor_from_t(t, 5) for t in (-1.0, 0.0, 1.0, 2.0, 3.0, 4.709)]
    assert all(later > earlier for earlier, later in zip(values, values[1:]))


def test_bayes_factor_matches_trapezoid_oracle():
    t, n = 4.709, 5
    delta = np.linspace(0.0, 20.0, 40_001)
    prior = 2.0 * scipy_stats.cauchy.pdf(delta, scale=DEFAULT_CAUCHY_SCALE)
    marginal = integrate.trapezoid(scipy_stats.nct.pdf(t, n - 1, delta * np.sqrt(n)) * prior, delta)
    expected = marginal / scipy_stats.t.pdf(t, n - 1)
    assert jzs_bayes_factor_from_t(t, n) == pytest.approx(expected, rel=0.01)


def division(subject: str, label: str, scores, checksum: str = "folds") -> DivisionScores:
    return DivisionScores(subject=subject, label=label, scores=tuple(scores), checksum=checksum)


def test_identical_scores_give_no_evidence():
    scores = [0.8, 0.7, 0.9, 0.75, 0.8, 0.85, 0.7, 0.9, 0.8, 0.78]
    comparison = compare_divisions(division("S01", "KAN", scores), division("S01", "MLP", scores), 0.05)
    assert comparison.result is None
    assert not comparison.significant
    assert comparison.verdict.startswith("no evidence")


def test_fold_mismatch_is_rejected():
    with pytest.raises(HarnessError):
        compare_divisions(
            division("S01", "KAN", [0.5] * 10, "one"), division("S01", "MLP", [0.4] * 10, "two"), 0.05
        )


def test_clear_winner_is_flagged():
    better = division("S01", "KAN", np.linspace(0.80, 0.89, 10))
    worse = division("S01", "MLP", np.linspace(0.70, 0.79, 10))
    comparison = compare_divisions(better, worse, 0.05)
    assert comparison.significant
    assert comparison.result.p_value == pytest.approx(1 / 1024)
    assert "KAN > MLP" in comparison.verdict
    reverse = compare_divisions(worse, better, 0.05)
    assert not reverse.significant
    assert reverse.verdict == NO_DIFFERENCE


def test_subject_means_comparison_reports_bayes_factor():
    comparison = compare_subject_means(
        "KAN", "MLP", [0.82, 0.85, 0.80, 0.88, 0.84], [0.80, 0.82, 0.79, 0.84, 0.82], 0.05
    )
    assert comparison.result.method == "paired-t"
    assert comparison.result.bayes_factor > 1.0
    assert comparison.significant


def hp_scores(rng):
    scores = {}
    for subject in ("S01", "S02", "S03"):
        for family, base in (("MLP", 0.7), ("KAN", 0.8), ("CNN", 0.75), ("FKAN", 0.75)):
            values = np.clip(base + rng.normal(0.0, 0.02, size=10), 0.0, 1.0)
            scores[(subject, family)] = division(subject, family, values, checksum=f"{subject}-folds")
    return scores


def test_hypothesis_one_layout(rng):
    report = hypothesis_one(hp_scores(rng), 0.05)
    assert report.hypothesis == "HP1"
    assert len(report.per_subject) == 6
    assert {(c.label_a, c.label_b) for c in report.per_subject} == {("KAN", "MLP"), ("FKAN", "CNN")}
    assert len(report.across_subjects) == 2
    kan = [c for c in report.per_subject if c.label_a == "KAN"]
    assert all(c.significant for c in kan)
    assert all(0.0 <= c.result.p_value <= 1.0 for c in report.per_subject if c.result)


def test_hypothesis_two_pairs_specific_with_pooled(rng):
    specific = hp_scores(rng)
    pooled = {
        key: division(value.subject, f"{value.label}-pooled", np.array(value.scores) - 0.05, value.checksum)
        for key, value in specific.items()
    }
    report = hypothesis_two(specific, pooled, 0.05)
    assert report.hypothesis == "HP2"
    assert len(report.per_subject) == 12
    assert all(c.significant for c in report.per_subject)
    assert len(report.across_subjects) == 4
