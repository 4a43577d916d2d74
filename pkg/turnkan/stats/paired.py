"""
One-sided paired tests of "A scores higher than B"
"""
import logging
import warnings
from typing import Tuple

import numpy as np
from scipy import integrate, special, stats
from scipy.integrate import IntegrationWarning

from turnkan.schemas.stats import PairedScores, TestResult
from turnkan.utils.exceptions import NumericalError, StatisticalTestError

logger = logging.getLogger(__name__)

MIN_WILCOXON_PAIRS = 5
DEFAULT_CAUCHY_SCALE = np.sqrt(2.0) / 2.0
# |d| is rounded to this many decimals before ranking, so 0.3-0.2 ties 0.7-0.6
_TIE_DECIMALS = 12


def _differences(pairs: PairedScores) -> np.ndarray:
    return np.asarray(pairs.a, dtype=np.float64) - np.asarray(pairs.b, dtype=np.float64)


def signed_rank_counts(doubled_ranks: np.ndarray) -> np.ndarray:
    """
    Null counts of the doubled positive rank sum

    Under the null each rank is positive with probability 1/2, so the
    generating function is prod_j (1 + z^{r_j}). Entry s of the result is the
    number of sign assignments whose doubled W+ equals s.
    """
    counts = np.zeros(int(doubled_ranks.sum()) + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled_ranks.astype(np.int64):
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:counts.size - r]
        counts = counts + shifted
    return counts


def wilcoxon_one_tailed(pairs: PairedScores) -> TestResult:
    """
    Exact one-sided Wilcoxon signed-rank test

    Zero differences are dropped and tied |d| share average ranks. The null
    distribution is enumerated exactly over doubled (integer) ranks.

    Raises:
        StatisticalTestError: All differences are zero or fewer than 5 remain
    """
    d = _differences(pairs)
    magnitude = np.round(np.abs(d), _TIE_DECIMALS)
    d, magnitude = d[magnitude > 0.0], magnitude[magnitude > 0.0]
    if d.size == 0:
        raise StatisticalTestError("all-zero differences: the test is undefined")
    if d.size < MIN_WILCOXON_PAIRS:
        raise StatisticalTestError(
            f"{d.size} non-zero differences, need at least {MIN_WILCOXON_PAIRS}"
        )

    doubled = np.rint(2.0 * stats.rankdata(magnitude)).astype(np.int64)
    observed = int(doubled[d > 0].sum())
    counts = signed_rank_counts(doubled)
    p_value = float(counts[observed:].sum()) / float(2 ** d.size)
    return TestResult(
        method="wilcoxon-exact",
        statistic=observed / 2.0,
        p_value=min(max(p_value, 0.0), 1.0),
        n=int(d.size),
        direction=f"{pairs.label_a} > {pairs.label_b}",
    )


def _t_statistic(pairs: PairedScores) -> Tuple[float, int]:
    d = _differences(pairs)
    sd = float(np.std(d, ddof=1))
    if not sd > 0.0:
        raise StatisticalTestError("degenerate differences: standard deviation is zero")
    return float(np.mean(d) / (sd / np.sqrt(d.size))), int(d.size)


def t_upper_tail(t: float, df: int) -> float:
    """P(T >= t) for Student's t through the regularized incomplete beta"""
    tail = 0.5 * float(special.betainc(df / 2.0, 0.5, df / (df + t * t)))
    return tail if t >= 0 else 1.0 - tail


def paired_t_one_tailed(pairs: PairedScores) -> TestResult:
    """
    One-sided paired t-test

    Raises:
        StatisticalTestError: The differences have zero spread
    """
    t, n = _t_statistic(pairs)
    return TestResult(
        method="paired-t",
        statistic=t,
        p_value=min(max(t_upper_tail(t, n - 1), 0.0), 1.0),
        n=n,
        direction=f"{pairs.label_a} > {pairs.label_b}",
    )


def jzs_bayes_factor_from_t(t: float, n: int, scale: float = DEFAULT_CAUCHY_SCALE) -> float:
    """
    One-sided JZS Bayes factor BF10 for a one-sample t statistic

    The effect size carries a half-Cauchy(0, scale) prior on [0, inf); the
    marginal likelihood of t under it is divided by the central t density.

    Raises:
        NumericalError: The quadrature does not converge
    """
    df = n - 1
    root_n = np.sqrt(n)

    def integrand(delta: float) -> float:
        prior = 2.0 * stats.cauchy.pdf(delta, loc=0.0, scale=scale)
        return float(stats.nct.pdf(t, df, delta * root_n)) * prior

    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            marginal, _ = integrate.quad(integrand, 0.0, np.inf, epsrel=1e-6, limit=200)
        except IntegrationWarning as e:
            raise NumericalError(f"Bayes factor integration did not converge: {e}") from None
    null = float(stats.t.pdf(t, df))
    if not (np.isfinite(marginal) and null > 0.0):
        raise NumericalError(f"Bayes factor is undefined for t={t}, n={n}")
    return marginal / null


def jzs_bayes_factor(pairs: PairedScores, scale: float = DEFAULT_CAUCHY_SCALE) -> float:
    t, n = _t_statistic(pairs)
    return jzs_bayes_factor_from_t(t, n, scale)
