"""Plug-in estimators for zero-inflated log-normal data."""
import logging
from typing import Optional

import numpy as np

from splitq.exceptions import EstimationError

from .data import ObservedDataset
from .em import em_mvn
from .result import EstimationResult


logger = logging.getLogger(__name__)

__all__ = ["estimate_zmvln"]


def estimate_zmvln(
    data: ObservedDataset, tol: Optional[float] = None, max_iters: Optional[int] = None
) -> EstimationResult:
    """Nonzero rates, log-scale EM estimates and the implied population means.

    lambda_k is the share of nonzero answers among the observed ones. The
    log-normal part runs EM on the logs of the nonzero answers, treating zeros
    as missing. eta_k = lambda_k exp(mu_k + sigma_kk / 2); eta_literal holds
    lambda_k * mu_k. Items whose observed answers are all zero get lambda = 0,
    eta = 0 and NaN log-normal estimates.
    """
    observed_counts = data.observed.sum(axis=0)
    never = np.flatnonzero(observed_counts == 0)
    if never.size:
        msg = f"item {int(never[0])} is never observed"
        logger.error(msg)
        raise EstimationError(msg)
    values = data.filled()
    if np.any(values < 0):
        raise EstimationError("zero-inflated responses must be non negative")
    nonzero = data.observed & (values > 0)
    lambda_hat = nonzero.sum(axis=0) / observed_counts
    warnings = []

    K = data.K
    mu_hat = np.full(K, np.nan)
    sigma_hat = np.full((K, K), np.nan)
    items = np.flatnonzero(lambda_hat > 0)
    if items.size < K:
        msg = f"items {np.flatnonzero(lambda_hat == 0).tolist()} have only zero answers"
        logger.warning(msg)
        warnings.append(msg)
    loglik, converged, iterations = [], True, 0
    if items.size:
        mask = nonzero[:, items]
        rows = np.flatnonzero(mask.any(axis=1))
        logs = np.log(np.where(mask, values[:, items], 1.0))
        lognormal = em_mvn(ObservedDataset(logs[rows], mask[rows]), tol, max_iters)
        mu_hat[items] = lognormal.mu_hat
        sigma_hat[np.ix_(items, items)] = lognormal.sigma_hat
        loglik, converged, iterations = lognormal.loglik, lognormal.converged, lognormal.iterations
        warnings.extend(lognormal.warnings)

    positive = lambda_hat > 0
    eta_hat = np.zeros(K)
    eta_literal = np.zeros(K)
    eta_hat[positive] = lambda_hat[positive] * np.exp(
        mu_hat[positive] + np.diag(sigma_hat)[positive] / 2
    )
    eta_literal[positive] = lambda_hat[positive] * mu_hat[positive]
    return EstimationResult(
        mu_hat=mu_hat,
        sigma_hat=sigma_hat,
        loglik=loglik,
        converged=converged,
        iterations=iterations,
        lambda_hat=lambda_hat,
        eta_hat=eta_hat,
        eta_literal=eta_literal,
        warnings=warnings,
    )
