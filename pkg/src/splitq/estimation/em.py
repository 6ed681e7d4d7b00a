"""Maximum likelihood for multivariate normal data with arbitrary missingness."""
import logging
from typing import List, Optional, Tuple

import numpy as np

from splitq.exceptions import EstimationError

from .conditional import MaskBatch, conditional_moments, completed, mask_batches
from .data import ObservedDataset
from .result import EstimationResult


logger = logging.getLogger(__name__)

__all__ = ["em_mvn", "observed_loglik", "DEFAULT_TOL", "DEFAULT_MAX_ITERS"]

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITERS = 2000
RIDGE = 1e-8


def observed_loglik(data: ObservedDataset, mu: np.ndarray, sigma: np.ndarray) -> float:
    """Log-likelihood of the observed cells under N(mu, sigma)."""
    batches = mask_batches(data)
    try:
        return float(sum(m.loglik.sum() for m in conditional_moments(batches, mu, sigma)))
    except np.linalg.LinAlgError:
        return -np.inf


def _drop_empty_rows(data: ObservedDataset, warnings: List[str]) -> ObservedDataset:
    empty = ~data.observed.any(axis=1)
    if empty.any():
        msg = f"dropping {int(empty.sum())} rows with no observed items"
        logger.warning(msg)
        warnings.append(msg)
        data = data.rows(np.flatnonzero(~empty))
    return data


def _initial(data: ObservedDataset) -> Tuple[np.ndarray, np.ndarray]:
    """Available-case means and a diagonal of available-case variances."""
    counts = data.observed.sum(axis=0)
    filled = data.filled()
    mu = filled.sum(axis=0) / counts
    centred = np.where(data.observed, filled - mu, 0.0)
    variances = (centred ** 2).sum(axis=0) / counts
    variances = np.where(variances > 0, variances, 1.0)
    return mu, np.diag(variances)


def _e_step(
    batches: List[MaskBatch], mu: np.ndarray, sigma: np.ndarray
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Observed loglik and expected sufficient statistics sum(x), sum(x x^T)."""
    K = mu.size
    loglik = 0.0
    first = np.zeros(K)
    second = np.zeros((K, K))
    for moments in conditional_moments(batches, mu, sigma):
        loglik += moments.loglik.sum()
        rows = completed(moments, K)
        first += rows.sum(axis=0)
        second += rows.T @ rows
        batch = moments.batch
        if not batch.complete:
            flat = (batch.mis[:, :, None] * K + batch.mis[:, None, :]).ravel()
            scattered = np.bincount(flat, weights=moments.cov.ravel(), minlength=K * K)
            second += scattered.reshape(K, K)
    return float(loglik), first, second


def _is_pd(sigma: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        return False
    return True


def em_mvn(
    data: ObservedDataset, tol: Optional[float] = None, max_iters: Optional[int] = None
) -> EstimationResult:
    """EM estimates of the mean and covariance.

    Starts from available-case moments and stops when the relative change of
    the observed log-likelihood drops below tol. Complete data are solved in
    closed form.
    """
    tol = DEFAULT_TOL if tol is None else tol
    max_iters = DEFAULT_MAX_ITERS if max_iters is None else max_iters
    warnings: List[str] = []
    data = _drop_empty_rows(data, warnings)
    if data.n == 0:
        raise EstimationError("no observed responses")
    never = np.flatnonzero(~data.observed.any(axis=0))
    if never.size:
        msg = f"item {int(never[0])} is never observed"
        logger.error(msg)
        raise EstimationError(msg)

    n = data.n
    if data.observed.all():
        values = data.filled()
        mu = values.mean(axis=0)
        centred = values - mu
        sigma = centred.T @ centred / n
        loglik = observed_loglik(data, mu, sigma)
        return EstimationResult(mu, sigma, [loglik], True, 1, warnings=warnings)

    batches = mask_batches(data)
    mu, sigma = _initial(data)
    trace: List[float] = []
    repaired = False
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        loglik, first, second = _e_step(batches, mu, sigma)
        trace.append(loglik)
        if len(trace) > 1 and abs(loglik - trace[-2]) <= tol * abs(trace[-2]):
            converged = True
            break
        mu = first / n
        sigma = second / n - np.outer(mu, mu)
        sigma = (sigma + sigma.T) / 2
        if not _is_pd(sigma):
            if repaired:
                msg = f"covariance iterate not positive definite at iteration {iterations}"
                logger.error(msg)
                raise EstimationError(msg)
            repaired = True
            sigma = sigma + RIDGE * np.diag(np.abs(np.diag(sigma)))
            msg = f"ridge repair applied to the covariance at iteration {iterations}"
            logger.warning(msg)
            warnings.append(msg)
            if not _is_pd(sigma):
                raise EstimationError(f"ridge repair failed at iteration {iterations}")
    else:
        trace.append(observed_loglik(data, mu, sigma))
        msg = f"EM did not converge in {max_iters} iterations"
        logger.warning(msg)
        warnings.append(msg)
    return EstimationResult(mu, sigma, trace, converged, iterations, warnings=warnings)
