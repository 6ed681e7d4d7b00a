"""Multivariate normal responses observed under a split questionnaire design."""
import dataclasses
import json
import logging
from typing import IO, Any, Dict

import numpy as np

from splitq.exceptions import DataFormatError, ParameterError, SingularPatternError
from splitq.patterns import DesignDistribution, Pattern, PatternSet

from .information import BlockCriterion, InformationBlock
from .linalg import batched_spd_inverse, duplication_matrix, vech_positions


logger = logging.getLogger(__name__)

__all__ = [
    "MvnParams",
    "PatternInfo",
    "MvnCriterion",
    "pattern_info",
    "mu_fisher",
    "a_criterion_mvn",
    "a_gradient_mvn",
    "full_fisher_mvn",
    "item_variances_mvn",
    "mvn_params_from_dict",
    "read_mvn_params",
]

SYMMETRY_TOLERANCE = 1e-10


def validate_covariance(sigma: np.ndarray, K: int) -> np.ndarray:
    """Return sigma as a read only float array or raise ParameterError."""
    sigma = np.array(sigma, dtype=float)
    if sigma.shape != (K, K):
        raise ParameterError(f"sigma must be {K}x{K}, got shape {sigma.shape}")
    if not np.all(np.isfinite(sigma)):
        raise ParameterError("sigma has non finite entries")
    if np.max(np.abs(sigma - sigma.T)) > SYMMETRY_TOLERANCE:
        raise ParameterError("sigma is not symmetric")
    try:
        np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as e:
        raise ParameterError("sigma is not positive definite") from e
    sigma.setflags(write=False)
    return sigma


def validate_vector(values: np.ndarray, K: int, name: str) -> np.ndarray:
    """Return a read only length-K float vector or raise ParameterError."""
    values = np.array(values, dtype=float)
    if values.shape != (K,):
        raise ParameterError(f"{name} must have length {K}, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ParameterError(f"{name} has non finite entries")
    values.setflags(write=False)
    return values


@dataclasses.dataclass(frozen=True, eq=False)
class MvnParams:
    """Mean vector and covariance matrix of the responses."""

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        """Validate the parameters and freeze the arrays."""
        mu = np.asarray(self.mu, dtype=float)
        if mu.ndim != 1 or mu.size == 0:
            raise ParameterError(f"mu must be a non empty vector, got shape {mu.shape}")
        object.__setattr__(self, "mu", validate_vector(mu, mu.size, "mu"))
        object.__setattr__(self, "sigma", validate_covariance(self.sigma, mu.size))

    @property
    def K(self) -> int:
        """Number of questions."""
        return self.mu.size

    def to_dict(self) -> Dict[str, Any]:
        """Json friendly representation."""
        return {"mu": self.mu.tolist(), "sigma": self.sigma.tolist()}


@dataclasses.dataclass(frozen=True, eq=False)
class PatternInfo:
    """Per-observation information about mu carried by one pattern, embedded in K x K."""

    pattern: Pattern
    M: np.ndarray


def restricted_inverses(sigma: np.ndarray, index: np.ndarray) -> np.ndarray:
    """Stack with the inverse of sigma restricted to the items of every row of index."""
    restricted = sigma[index[:, :, None], index[:, None, :]]
    try:
        return batched_spd_inverse(restricted)
    except np.linalg.LinAlgError as e:
        pattern = Pattern(tuple(index[getattr(e, "index", None) or 0]))
        msg = f"sigma restricted to pattern {pattern} is singular"
        logger.error(msg)
        raise SingularPatternError(msg) from e


def sigma_information(inverses: np.ndarray) -> np.ndarray:
    """0.5 D^T (M kron M) D for every matrix M of the stack."""
    J, m, _ = inverses.shape
    D = duplication_matrix(m)
    kron = np.einsum("jab,jcd->jacbd", inverses, inverses).reshape(J, m * m, m * m)
    return 0.5 * (D.T @ kron @ D)


def vech_index(K: int, index: np.ndarray) -> np.ndarray:
    """Global vech positions of the local vech coordinates of every pattern.

    index holds the sorted item indices of each pattern, one row per pattern.
    """
    m = index.shape[1]
    # vech of a local matrix walks (c, r) for the upper triangle pairs r <= c
    rows, cols = np.triu_indices(m)
    return vech_positions(K)[index[:, cols], index[:, rows]]


def mu_block(params: MvnParams, pattern_set: PatternSet) -> InformationBlock:
    """Information block of the mean vector."""
    return InformationBlock(
        name="mu",
        dim=params.K,
        index=pattern_set.index,
        local=restricted_inverses(params.sigma, pattern_set.index),
        transform=np.eye(params.K),
    )


def sigma_block(params: MvnParams, pattern_set: PatternSet) -> InformationBlock:
    """Information block of vech(sigma), which plays no part in the criterion."""
    K = params.K
    dim = K * (K + 1) // 2
    return InformationBlock(
        name="vech(sigma)",
        dim=dim,
        index=vech_index(K, pattern_set.index),
        local=sigma_information(restricted_inverses(params.sigma, pattern_set.index)),
        transform=np.zeros((K, dim)),
    )


class MvnCriterion(BlockCriterion):
    """A-criterion tr(M^-1) of the mean vector under multivariate normal responses."""

    def __init__(self, params: MvnParams, pattern_set: PatternSet):
        """Precompute the per-pattern information of the mean."""
        if params.K != pattern_set.K:
            raise ParameterError(f"Parameters have K={params.K}, patterns K={pattern_set.K}")
        self.params = params
        self.pattern_set = pattern_set
        super().__init__([mu_block(params, pattern_set)], pattern_set.incidence)


def pattern_info(params: MvnParams, pattern: Pattern) -> PatternInfo:
    """Information about mu from one observation of the given pattern."""
    if pattern.items[-1] >= params.K:
        raise ValueError(f"Pattern {pattern} is not valid for K={params.K}")
    single = PatternSet(params.K, len(pattern), [pattern])
    inverse = restricted_inverses(params.sigma, single.index)[0]
    M = np.zeros((params.K, params.K))
    items = np.asarray(pattern.items)
    M[np.ix_(items, items)] = inverse
    return PatternInfo(pattern, M)


def mu_fisher(params: MvnParams, design: DesignDistribution) -> np.ndarray:
    """Design information about mu, linear in the probabilities."""
    return MvnCriterion(params, design.pattern_set).fisher(design.probs)


def a_criterion_mvn(params: MvnParams, design: DesignDistribution) -> float:
    """Trace of the inverse design information about mu."""
    return MvnCriterion(params, design.pattern_set).value(design.probs)


def a_gradient_mvn(params: MvnParams, design: DesignDistribution) -> np.ndarray:
    """Gradient of the A-criterion with respect to the design probabilities."""
    return MvnCriterion(params, design.pattern_set).gradient(design.probs)


def full_fisher_mvn(params: MvnParams, design: DesignDistribution) -> np.ndarray:
    """Information about (mu, vech(sigma)), block diagonal between the two."""
    pattern_set = design.pattern_set
    criterion = BlockCriterion(
        [mu_block(params, pattern_set), sigma_block(params, pattern_set)], pattern_set.incidence
    )
    return criterion.fisher(design.probs)


def item_variances_mvn(params: MvnParams, design: DesignDistribution) -> np.ndarray:
    """Per-observation asymptotic variance of each estimated item mean."""
    return MvnCriterion(params, design.pattern_set).item_variances(design.probs)


def mvn_params_from_dict(data: Dict[str, Any]) -> MvnParams:
    """Build parameters from {"mu": [...], "sigma": [[...], ...]}."""
    try:
        return MvnParams(mu=np.asarray(data["mu"], dtype=float), sigma=data["sigma"])
    except (KeyError, TypeError, ValueError) as e:
        logger.error("Error while parsing mvn parameters")
        raise DataFormatError(f"invalid mvn parameters: {e}") from e


def read_mvn_params(reader: IO[str]) -> MvnParams:
    """Read parameters from a json stream."""
    try:
        data = json.load(reader)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"invalid parameter json at line {e.lineno}: {e.msg}") from e
    return mvn_params_from_dict(data)
