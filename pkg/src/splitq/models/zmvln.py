"""Zero-inflated multivariate log-normal responses.

Each answer is exp(X_k) * Z_k with X ~ MVN(mu, sigma) and independent
Z_k ~ Bernoulli(lambda_k). The quantity of interest is the vector of
population means eta_k = lambda_k exp(mu_k + sigma_kk / 2).
"""
import dataclasses
import itertools
import json
import logging
from typing import IO, Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from splitq.exceptions import DataFormatError, ParameterError
from splitq.patterns import DesignDistribution, Pattern, PatternSet

from .information import BlockCriterion, InformationBlock
from .linalg import vech_positions
from .mvn import (
    restricted_inverses,
    sigma_information,
    validate_covariance,
    validate_vector,
    vech_index,
)


logger = logging.getLogger(__name__)

__all__ = [
    "ZmvlnParams",
    "EtaVector",
    "ZmvlnCriterion",
    "zmvln_log_density",
    "zmvln_log_density_rows",
    "zmvln_sample",
    "zmvln_fisher",
    "eta_and_jacobian",
    "a_criterion_zmvln",
    "a_gradient_zmvln",
    "item_variances_zmvln",
    "zmvln_params_from_dict",
    "read_zmvln_params",
]

LAMBDA_CLAMP = 1e-9


@dataclasses.dataclass(frozen=True, eq=False)
class ZmvlnParams:
    """Nonzero probabilities plus log-scale mean and covariance."""

    lam: np.ndarray
    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        """Validate the parameters and freeze the arrays."""
        mu = np.asarray(self.mu, dtype=float)
        if mu.ndim != 1 or mu.size == 0:
            raise ParameterError(f"mu must be a non empty vector, got shape {mu.shape}")
        K = mu.size
        lam = validate_vector(self.lam, K, "lambda")
        if np.any(lam <= 0) or np.any(lam >= 1):
            raise ParameterError("lambda must lie strictly between 0 and 1")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", validate_vector(mu, K, "mu"))
        object.__setattr__(self, "sigma", validate_covariance(self.sigma, K))

    @property
    def K(self) -> int:
        """Number of questions."""
        return self.mu.size

    def to_dict(self) -> Dict[str, Any]:
        """Json friendly representation."""
        return {"lambda": self.lam.tolist(), "mu": self.mu.tolist(), "sigma": self.sigma.tolist()}


@dataclasses.dataclass(frozen=True, eq=False)
class EtaVector:
    """Population means of the responses."""

    eta: np.ndarray


def eta_and_jacobian(params: ZmvlnParams) -> Tuple[EtaVector, np.ndarray]:
    """Eta and its Jacobian with respect to (lambda, mu, vech(sigma))."""
    K = params.K
    scale = np.exp(params.mu + np.diag(params.sigma) / 2)
    eta = params.lam * scale
    diagonal = vech_positions(K)[np.arange(K), np.arange(K)]
    C3 = np.zeros((K, K * (K + 1) // 2))
    C3[np.arange(K), diagonal] = 0.5 * eta
    C = np.hstack([np.diag(scale), np.diag(eta), C3])
    return EtaVector(eta), C


def zmvln_log_density(params: ZmvlnParams, y_obs: np.ndarray, pattern: Pattern) -> float:
    """Log density of the answers to the items of a pattern.

    Zero answers only contribute their Bernoulli probability; the nonzero ones
    follow the log-normal marginal of their items.
    """
    y_obs = np.asarray(y_obs, dtype=float)
    items = np.asarray(pattern.items)
    if y_obs.shape != items.shape:
        raise ValueError(f"Expected {len(items)} answers, got shape {y_obs.shape}")
    if np.any(y_obs < 0):
        raise ValueError("Responses must be non negative")
    nonzero = y_obs > 0
    lam = params.lam[items]
    total = float(np.sum(np.log(np.where(nonzero, lam, 1 - lam))))
    if nonzero.any():
        sub = items[nonzero]
        logs = np.log(y_obs[nonzero])
        total += float(
            stats.multivariate_normal.logpdf(
                logs, mean=params.mu[sub], cov=params.sigma[np.ix_(sub, sub)]
            )
        )
        total -= float(logs.sum())
    return total


def zmvln_log_density_rows(
    params: ZmvlnParams, Y: np.ndarray, observed: Optional[np.ndarray] = None
) -> np.ndarray:
    """Log density of every row of Y restricted to its observed entries."""
    Y = np.asarray(Y, dtype=float)
    observed = np.ones(Y.shape, dtype=bool) if observed is None else np.asarray(observed, bool)
    if Y.ndim != 2 or Y.shape[1] != params.K or observed.shape != Y.shape:
        raise ValueError(f"Expected n x {params.K} responses and mask")
    values = np.where(observed, Y, 0.0)
    if np.any(values < 0):
        raise ValueError("Responses must be non negative")
    nonzero = observed & (values > 0)
    log_lam = np.log(params.lam)
    log_zero = np.log1p(-params.lam)
    out = np.sum(np.where(nonzero, log_lam, np.where(observed, log_zero, 0.0)), axis=1)
    groups, inverse = np.unique(nonzero, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    for g, group in enumerate(groups):
        if not group.any():
            continue
        rows = np.flatnonzero(inverse == g)
        items = np.flatnonzero(group)
        logs = np.log(values[np.ix_(rows, items)])
        density = stats.multivariate_normal.logpdf(
            logs, mean=params.mu[items], cov=params.sigma[np.ix_(items, items)]
        )
        out[rows] += np.atleast_1d(density) - logs.sum(axis=1)
    return out


def zmvln_sample(params: ZmvlnParams, n: int, seed: Any) -> np.ndarray:
    """Draw n response vectors."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    rng = np.random.default_rng(seed)
    chol = np.linalg.cholesky(params.sigma)
    logs = params.mu + rng.standard_normal((n, params.K)) @ chol.T
    indicators = rng.random((n, params.K)) < params.lam
    return np.where(indicators, np.exp(logs), 0.0)


def _subset_weights(lam: np.ndarray, index: np.ndarray, chosen: Tuple[int, ...]) -> np.ndarray:
    """Probability, per pattern, that exactly the chosen local items are nonzero."""
    mask = np.zeros(index.shape[1], dtype=bool)
    mask[list(chosen)] = True
    local_lam = lam[index]
    return np.prod(np.where(mask, local_lam, 1 - local_lam), axis=1)


class ZmvlnCriterion(BlockCriterion):
    """A-criterion tr(C I^-1 C^T) of eta under zero-inflated log-normal responses.

    The information is block diagonal over lambda, mu and vech(sigma). The mu and
    vech(sigma) blocks average the normal information of the nonzero subset of a
    pattern over the probability that exactly that subset is nonzero.
    """

    def __init__(self, params: ZmvlnParams, pattern_set: PatternSet):
        """Precompute the per-pattern contributions of every block."""
        if params.K != pattern_set.K:
            raise ParameterError(f"Parameters have K={params.K}, patterns K={pattern_set.K}")
        self.params = params
        self.pattern_set = pattern_set
        self.warnings: List[str] = []
        K, m = pattern_set.K, pattern_set.m
        index = pattern_set.index
        J = pattern_set.J
        _, C = eta_and_jacobian(params)

        lam = np.clip(params.lam, LAMBDA_CLAMP, 1 - LAMBDA_CLAMP)
        if np.any(lam != params.lam):
            msg = f"lambda clamped to [{LAMBDA_CLAMP}, {1 - LAMBDA_CLAMP}]"
            logger.warning(msg)
            self.warnings.append(msg)
        bernoulli = 1.0 / (lam * (1 - lam))
        lam_local = np.zeros((J, m, m))
        lam_local[:, np.arange(m), np.arange(m)] = bernoulli[index]

        mu_local = np.zeros((J, m, m))
        width = m * (m + 1) // 2
        sigma_local = np.zeros((J, width, width))
        local_positions = vech_positions(m)
        for size in range(1, m + 1):
            for chosen in itertools.combinations(range(m), size):
                weights = _subset_weights(params.lam, index, chosen)
                positions = np.asarray(chosen)
                inverses = restricted_inverses(params.sigma, index[:, positions])
                mu_local[:, positions[:, None], positions[None, :]] += (
                    weights[:, None, None] * inverses
                )
                rows, cols = np.triu_indices(size)
                vech_at = local_positions[positions[cols], positions[rows]]
                sigma_local[:, vech_at[:, None], vech_at[None, :]] += (
                    weights[:, None, None] * sigma_information(inverses)
                )

        blocks = [
            InformationBlock("lambda", K, index, lam_local, C[:, :K]),
            InformationBlock("mu", K, index, mu_local, C[:, K : 2 * K]),
            InformationBlock(
                "vech(sigma)", K * (K + 1) // 2, vech_index(K, index), sigma_local, C[:, 2 * K :]
            ),
        ]
        super().__init__(blocks, pattern_set.incidence)


def zmvln_fisher(params: ZmvlnParams, design: DesignDistribution) -> np.ndarray:
    """Information about (lambda, mu, vech(sigma)), side 2K + K(K+1)/2."""
    return ZmvlnCriterion(params, design.pattern_set).fisher(design.probs)


def a_criterion_zmvln(params: ZmvlnParams, design: DesignDistribution) -> float:
    """Trace of the delta-method covariance of eta."""
    return ZmvlnCriterion(params, design.pattern_set).value(design.probs)


def a_gradient_zmvln(params: ZmvlnParams, design: DesignDistribution) -> np.ndarray:
    """Gradient of the eta A-criterion with respect to the design probabilities."""
    return ZmvlnCriterion(params, design.pattern_set).gradient(design.probs)


def item_variances_zmvln(params: ZmvlnParams, design: DesignDistribution) -> np.ndarray:
    """Per-observation asymptotic variance of each estimated eta_k."""
    return ZmvlnCriterion(params, design.pattern_set).item_variances(design.probs)


def zmvln_params_from_dict(data: Dict[str, Any]) -> ZmvlnParams:
    """Build parameters from {"lambda": [...], "mu": [...], "sigma": [[...], ...]}."""
    try:
        return ZmvlnParams(
            lam=np.asarray(data["lambda"], dtype=float),
            mu=np.asarray(data["mu"], dtype=float),
            sigma=data["sigma"],
        )
    except (KeyError, TypeError, ValueError) as e:
        logger.error("Error while parsing zmvln parameters")
        raise DataFormatError(f"invalid zmvln parameters: {e}") from e


def read_zmvln_params(reader: IO[str]) -> ZmvlnParams:
    """Read parameters from a json stream."""
    try:
        data = json.load(reader)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"invalid parameter json at line {e.lineno}: {e.msg}") from e
    return zmvln_params_from_dict(data)
