"""Hajek ratio estimator of item means and its approximate design variance."""
import logging

import numpy as np

from .data import ObservedDataset


logger = logging.getLogger(__name__)

__all__ = ["hk_mean", "hk_variance_approx"]


def hk_mean(data: ObservedDataset, inclusion: np.ndarray) -> np.ndarray:
    """Inclusion weighted mean of the observed answers of every item.

    Items without any observation get NaN.
    """
    inclusion = np.asarray(inclusion, dtype=float)
    if inclusion.shape != (data.K,):
        raise ValueError(f"Expected {data.K} inclusion probabilities, got {inclusion.shape}")
    if np.any(inclusion <= 0):
        raise ValueError("Inclusion probabilities must be positive")
    weights = data.observed / inclusion
    totals = (weights * data.filled()).sum(axis=0)
    mass = weights.sum(axis=0)
    missing = mass == 0
    if missing.any():
        logger.warning(f"items {np.flatnonzero(missing).tolist()} have no observations")
    return np.divide(totals, mass, out=np.full(data.K, np.nan), where=~missing)


def hk_variance_approx(column: np.ndarray, n: int, inclusion: float) -> float:
    """Approximate variance of the item mean when n of the N units are sampled.

    (N / (n p) - 1) * sum((y - mean)^2) / (N (N - 1)).
    """
    column = np.asarray(column, dtype=float)
    N = column.size
    if inclusion <= 0:
        raise ValueError(f"Inclusion probability must be positive, got {inclusion}")
    if not 1 <= n <= N or N < 2:
        raise ValueError(f"Need 1 <= n <= N and N >= 2, got n={n}, N={N}")
    spread = float(((column - column.mean()) ** 2).sum())
    return (N / (n * inclusion) - 1) * spread / (N * (N - 1))
