"""Completion of missing cells by draws from their conditional normal distribution."""
import logging
from typing import Any, List

import numpy as np

from splitq.models import MvnParams

from .conditional import conditional_moments, mask_batches
from .data import ObservedDataset


logger = logging.getLogger(__name__)

__all__ = ["conditional_impute", "imputed_mean"]


def conditional_impute(
    data: ObservedDataset, params: MvnParams, draws: int, seed: Any
) -> List[np.ndarray]:
    """Completed copies of the data, each missing cell drawn given the observed cells of its row.

    Rows without any observed item are drawn from the marginal distribution.
    """
    if draws < 1:
        raise ValueError(f"draws must be positive, got {draws}")
    if params.K != data.K:
        raise ValueError(f"Parameters have K={params.K}, data K={data.K}")
    rng = np.random.default_rng(seed)
    base = data.filled()
    moments = [m for m in conditional_moments(mask_batches(data), params.mu, params.sigma)]
    factors = [np.linalg.cholesky(m.cov) for m in moments if not m.batch.complete]
    empty = np.flatnonzero(~data.observed.any(axis=1))
    marginal = np.linalg.cholesky(params.sigma)
    completed_sets = []
    for _ in range(draws):
        out = base.copy()
        partial = (m for m in moments if not m.batch.complete)
        for m, chol in zip(partial, factors):
            noise = rng.standard_normal(m.mean.shape)
            filled = m.mean + np.einsum("rab,rb->ra", chol, noise)
            block = out[m.batch.rows]
            np.put_along_axis(block, m.batch.mis, filled, axis=1)
            out[m.batch.rows] = block
        if empty.size:
            out[empty] = params.mu + rng.standard_normal((empty.size, data.K)) @ marginal.T
        completed_sets.append(out)
    return completed_sets


def imputed_mean(data: ObservedDataset, params: MvnParams, draws: int, seed: Any) -> np.ndarray:
    """Average over the completed copies of their column means."""
    completed_sets = conditional_impute(data, params, draws, seed)
    return np.mean([values.mean(axis=0) for values in completed_sets], axis=0)
