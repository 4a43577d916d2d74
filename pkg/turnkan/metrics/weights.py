"""
Inverse-frequency class weights
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from turnkan.utils.exceptions import DomainError


@dataclass(frozen=True)
class ClassWeights:
    """w_k = n / (C * n_k), kept as exact fractions"""
    counts: Tuple[int, ...]
    exact: Tuple[Fraction, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def num_classes(self) -> int:
        return len(self.counts)

    @property
    def values(self) -> np.ndarray:
        return np.array([float(w) for w in self.exact])

    def weighted_total(self) -> Fraction:
        """sum_k w_k * n_k, which equals n"""
        return sum((w * n for w, n in zip(self.exact, self.counts)), Fraction(0))


def class_weights(counts: Sequence[int], num_classes: Optional[int] = None) -> ClassWeights:
    """
    Weights that give every class the same total mass

    Raises:
        DomainError: A class count is zero or negative, or the count vector
            length disagrees with num_classes
    """
    counts = tuple(int(n) for n in counts)
    num_classes = num_classes or len(counts)
    if len(counts) != num_classes:
        raise DomainError(f"{len(counts)} counts for {num_classes} classes")
    if any(n < 1 for n in counts):
        raise DomainError(f"every class needs at least one window, got counts {counts}")
    total = sum(counts)
    exact = tuple(Fraction(total, num_classes * n) for n in counts)
    return ClassWeights(counts=counts, exact=exact)
