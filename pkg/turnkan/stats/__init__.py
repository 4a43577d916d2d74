from turnkan.stats.harness import (
    DivisionScores,
    compare_divisions,
    compare_subject_means,
    hypothesis_one,
    hypothesis_two,
    run_harness,
)
from turnkan.stats.paired import (
    jzs_bayes_factor,
    jzs_bayes_factor_from_t,
    paired_t_one_tailed,
    signed_rank_counts,
    wilcoxon_one_tailed,
)

__all__ = [
    "DivisionScores",
    "compare_divisions",
    "compare_subject_means",
    "hypothesis_one",
    "hypothesis_two",
    "jzs_bayes_factor",
    "jzs_bayes_factor_from_t",
    "paired_t_one_tailed",
    "run_harness",
    "signed_rank_counts",
    "wilcoxon_one_tailed",
]
