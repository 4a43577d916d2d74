"""
Gaussian-process surrogate with a Matern-5/2 kernel and expected improvement
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.spatial.distance import cdist
from scipy.stats import norm

logger = logging.getLogger(__name__)

DEFAULT_LENGTH_SCALES = tuple(np.logspace(-1.5, 0.5, 15))


def matern52(a: np.ndarray, b: np.ndarray, length_scale: float) -> np.ndarray:
    r = np.sqrt(5.0) * cdist(a, b) / length_scale
    return (1.0 + r + r * r / 3.0) * np.exp(-r)


class GaussianProcess:
    """
    Zero-mean GP on standardized targets

    The length scale is chosen from a fixed grid by log marginal likelihood.
    """

    def __init__(self, noise: float = 1e-6, length_scales: Sequence[float] = DEFAULT_LENGTH_SCALES):
        self.noise = noise
        self.length_scales = tuple(length_scales)
        self.length_scale: Optional[float] = None
        self._x: Optional[np.ndarray] = None
        self._factor = None
        self._alpha: Optional[np.ndarray] = None
        self._y_mean = 0.0
        self._y_std = 1.0

    def _factorize(self, x: np.ndarray, length_scale: float):
        k = matern52(x, x, length_scale)
        jitter = self.noise
        for _ in range(6):
            try:
                return cho_factor(k + jitter * np.eye(len(x)), lower=True)
            except LinAlgError:
                jitter *= 10.0
        return None

    def fit(self, x: np.ndarray, y: np.ndarray) -> "GaussianProcess":
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        y = np.asarray(y, dtype=np.float64)
        self._y_mean = float(y.mean())
        self._y_std = float(y.std()) or 1.0
        z = (y - self._y_mean) / self._y_std

        best = -np.inf
        for length_scale in self.length_scales:
            factor = self._factorize(x, length_scale)
            if factor is None:
                continue
            alpha = cho_solve(factor, z)
            log_ml = -0.5 * z @ alpha - np.log(np.diag(factor[0])).sum() - 0.5 * len(z) * np.log(2 * np.pi)
            if log_ml > best:
                best = log_ml
                self.length_scale, self._factor, self._alpha = length_scale, factor, alpha
        if self._factor is None:
            raise LinAlgError("kernel matrix is not positive definite for any length scale")
        self._x = x
        logger.debug(f"GP fitted on {len(x)} points, length scale {self.length_scale:.3g}")
        return self

    def predict(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Posterior mean and standard deviation in target units"""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        k_star = matern52(x, self._x, self.length_scale)
        mean = k_star @ self._alpha
        v = cho_solve(self._factor, k_star.T)
        var = np.maximum(1.0 - np.sum(k_star * v.T, axis=1), 0.0)
        return mean * self._y_std + self._y_mean, np.sqrt(var) * self._y_std


def expected_improvement(mean: np.ndarray, std: np.ndarray, best: float, xi: float = 0.01) -> np.ndarray:
    """EI for maximization; zero where the posterior has no spread"""
    improvement = mean - best - xi
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(std > 0, improvement / std, 0.0)
    ei = improvement * norm.cdf(z) + std * norm.pdf(z)
    return np.where(std > 0, np.maximum(ei, 0.0), 0.0)
