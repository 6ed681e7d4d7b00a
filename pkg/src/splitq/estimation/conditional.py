"""Conditional normal moments of the missing cells given the observed ones.

Rows are batched by their number of observed items so that every batch is a
stack of equally sized linear systems.
"""
import dataclasses
from typing import Iterator, List

import numpy as np
from scipy import linalg as sla

from .data import ObservedDataset


LOG_2PI = np.log(2 * np.pi)


@dataclasses.dataclass(frozen=True)
class MaskBatch:
    """Rows sharing a number of observed items, with their observed and missing item indices."""

    rows: np.ndarray
    obs: np.ndarray
    mis: np.ndarray
    y_obs: np.ndarray

    @property
    def complete(self) -> bool:
        """Whether the rows are fully observed."""
        return self.mis.shape[1] == 0


@dataclasses.dataclass
class ConditionalMoments:
    """Per-row conditional mean and covariance of the missing cells plus the observed loglik."""

    batch: MaskBatch
    loglik: np.ndarray
    mean: np.ndarray
    cov: np.ndarray


def mask_batches(data: ObservedDataset) -> List[MaskBatch]:
    """Split the rows with at least one observed item by their observed count."""
    counts = data.observed.sum(axis=1)
    # stable sort puts the observed items first, each part in increasing item order
    order = np.argsort(~data.observed, axis=1, kind="stable")
    filled = data.filled()
    batches = []
    for count in np.unique(counts):
        if count == 0:
            continue
        rows = np.flatnonzero(counts == count)
        obs = order[rows, :count]
        mis = order[rows, count:]
        y_obs = np.take_along_axis(filled[rows], obs, axis=1)
        batches.append(MaskBatch(rows, obs, mis, y_obs))
    return batches


def conditional_moments(
    batches: List[MaskBatch], mu: np.ndarray, sigma: np.ndarray
) -> Iterator[ConditionalMoments]:
    """Conditional moments of every batch under N(mu, sigma).

    One Cholesky factor per distinct observed set serves the log determinant,
    the whitened residuals and the regression coefficients.

    Raises numpy.linalg.LinAlgError when sigma restricted to some observed set is
    not positive definite.
    """
    for batch in batches:
        size, count = batch.obs.shape
        resid = batch.y_obs - mu[batch.obs]
        solved = np.empty_like(resid)
        logdet = np.empty(size)
        coef = np.empty((size, batch.mis.shape[1], count))
        keys, inverse = np.unique(batch.obs, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        for g, items in enumerate(keys):
            rows = inverse == g
            factor = sla.cho_factor(sigma[np.ix_(items, items)], lower=True)
            logdet[rows] = 2 * np.log(np.diag(factor[0])).sum()
            solved[rows] = sla.cho_solve(factor, resid[rows].T).T
            if not batch.complete:
                missing = batch.mis[np.flatnonzero(rows)[0]]
                # regression coefficients of the missing cells on the observed ones
                coef[rows] = sla.cho_solve(factor, sigma[np.ix_(items, missing)]).T
        loglik = -0.5 * (count * LOG_2PI + logdet + np.einsum("ro,ro->r", resid, solved))
        if batch.complete:
            yield ConditionalMoments(batch, loglik, np.zeros((size, 0)), np.zeros((size, 0, 0)))
            continue
        mis = batch.mis
        s_mo = sigma[mis[:, :, None], batch.obs[:, None, :]]
        s_mm = sigma[mis[:, :, None], mis[:, None, :]]
        mean = mu[mis] + np.einsum("rmo,ro->rm", coef, resid)
        cov = s_mm - coef @ np.swapaxes(s_mo, 1, 2)
        yield ConditionalMoments(batch, loglik, mean, (cov + np.swapaxes(cov, 1, 2)) / 2)


def completed(moments: ConditionalMoments, K: int) -> np.ndarray:
    """Rows of the batch with the missing cells replaced by their conditional means."""
    batch = moments.batch
    out = np.empty((len(batch.rows), K))
    np.put_along_axis(out, batch.obs, batch.y_obs, axis=1)
    if not batch.complete:
        np.put_along_axis(out, batch.mis, moments.mean, axis=1)
    return out
