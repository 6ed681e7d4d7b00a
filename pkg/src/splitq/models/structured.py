"""Block structured covariance for g groups of q questions."""
import logging

import numpy as np

from splitq.exceptions import ParameterError


logger = logging.getLogger(__name__)

__all__ = ["structured_sigma", "group_means", "structured_eigenvalues"]


def structured_eigenvalues(g: int, q: int, rho1: float, rho2: float) -> np.ndarray:
    """The three distinct eigenvalues of the structured correlation matrix."""
    return np.array(
        [
            1.0 - rho1,
            1.0 + (q - 1) * rho1 - q * rho2,
            1.0 + (q - 1) * rho1 + (g - 1) * q * rho2,
        ]
    )


def structured_sigma(g: int, q: int, rho1: float, rho2: float) -> np.ndarray:
    """Unit variance covariance with correlation rho1 within and rho2 between groups.

    Items are ordered group by group.
    """
    if g < 1 or q < 1:
        raise ValueError(f"Need g >= 1 and q >= 1, got g={g}, q={q}")
    eigenvalues = structured_eigenvalues(g, q, rho1, rho2)
    # an eigenvalue only exists when its multiplicity g(q-1), g-1 or 1 is positive
    present = np.array([q > 1, g > 1, True])
    if np.any(eigenvalues[present] <= 0):
        msg = f"Structured covariance with g={g}, q={q}, rho1={rho1}, rho2={rho2} is not PD"
        logger.error(msg)
        raise ParameterError(msg)
    labels = np.repeat(np.arange(g), q)
    same = labels[:, None] == labels[None, :]
    sigma = np.where(same, rho1, rho2)
    np.fill_diagonal(sigma, 1.0)
    return sigma


def group_means(g: int, q: int) -> np.ndarray:
    """Mean profile with every item of group i (1-based) equal to i."""
    return np.repeat(np.arange(1, g + 1, dtype=float), q)
