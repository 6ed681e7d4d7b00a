"""Parameter samplers for Bayes designs and finite parameter sets for minimax designs."""
import dataclasses
import logging
from typing import Any, List, Sequence

import numpy as np
from scipy import stats

from splitq.models import structured_sigma


logger = logging.getLogger(__name__)

__all__ = [
    "UniformCorrelationPrior",
    "InverseWishartPrior",
    "correlation_grid",
    "shrinkage_set",
    "DEFAULT_CORRELATIONS",
    "DEFAULT_SHRINKAGE",
]

DEFAULT_CORRELATIONS = tuple(round(0.1 * i, 1) for i in range(1, 10))
DEFAULT_SHRINKAGE = (0.25, 0.5, 0.75, 1.0)


def _with_sigma(template: Any, sigma: np.ndarray) -> Any:
    """Copy of the parameters of either model with a new covariance."""
    return dataclasses.replace(template, sigma=sigma)


@dataclasses.dataclass(frozen=True)
class UniformCorrelationPrior:
    """Uniform prior on 0 < rho2 < rho1 < 1 over the structured covariance family.

    Every other parameter is taken from the template.
    """

    template: Any
    g: int
    q: int

    def __post_init__(self):
        """Check the template matches the group layout."""
        if self.template.K != self.g * self.q:
            raise ValueError(f"Template has K={self.template.K}, expected {self.g * self.q}")

    def draw(self, rng: np.random.Generator) -> Any:
        """Draw a correlation pair and return the matching parameters."""
        rho2, rho1 = np.sort(rng.uniform(size=2))
        return _with_sigma(self.template, structured_sigma(self.g, self.q, rho1, rho2))


@dataclasses.dataclass(frozen=True)
class InverseWishartPrior:
    """Inverse-Wishart prior on the covariance with nu degrees of freedom and scale nu * sigma.

    Every other parameter is taken from the template, whose covariance is the
    preliminary estimate.
    """

    template: Any
    nu: float

    def __post_init__(self):
        """Validate the degrees of freedom."""
        if self.nu <= self.template.K - 1:
            raise ValueError(f"nu must exceed K - 1 = {self.template.K - 1}, got {self.nu}")

    def draw(self, rng: np.random.Generator) -> Any:
        """Draw a covariance and return the matching parameters."""
        sigma = stats.invwishart.rvs(
            df=self.nu, scale=self.nu * self.template.sigma, random_state=rng
        )
        sigma = np.atleast_2d(sigma)
        return _with_sigma(self.template, (sigma + sigma.T) / 2)


def correlation_grid(
    template: Any, g: int, q: int, values: Sequence[float] = DEFAULT_CORRELATIONS
) -> List[Any]:
    """Structured parameters for every pair rho2 < rho1 taken from the grid values."""
    members = []
    for rho1 in values:
        for rho2 in values:
            if rho2 < rho1:
                members.append(_with_sigma(template, structured_sigma(g, q, rho1, rho2)))
    if not members:
        raise ValueError("The correlation grid needs at least two distinct values")
    return members


def shrinkage_set(template: Any, factors: Sequence[float] = DEFAULT_SHRINKAGE) -> List[Any]:
    """Parameters whose correlations are the template's scaled by each factor.

    The variances are kept, so sigma_s = D^1/2 (s R + (1 - s) I) D^1/2.
    """
    sd = np.sqrt(np.diag(template.sigma))
    correlation = template.sigma / np.outer(sd, sd)
    identity = np.eye(len(sd))
    members = []
    for factor in factors:
        if not 0.0 <= factor <= 1.0:
            raise ValueError(f"Shrinkage factors must lie in [0, 1], got {factor}")
        shrunk = factor * correlation + (1 - factor) * identity
        members.append(_with_sigma(template, shrunk * np.outer(sd, sd)))
    return members
