"""Drawing respondents and the questions they are administered."""
import logging
from typing import Any

import numpy as np

from splitq.estimation import ObservedDataset
from splitq.patterns import DesignDistribution


logger = logging.getLogger(__name__)

__all__ = ["apply_design", "deterministic_design", "sample_rows"]


def sample_rows(population: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Simple random sample of n rows without replacement."""
    N = population.shape[0]
    if not 1 <= n <= N:
        raise ValueError(f"Need 1 <= n <= N, got n={n}, N={N}")
    return population[rng.choice(N, size=n, replace=False)]


def apply_design(
    population: np.ndarray, n: int, design: DesignDistribution, seed: Any
) -> ObservedDataset:
    """Sample n respondents and draw one pattern per respondent from the design."""
    if population.shape[1] != design.K:
        raise ValueError(f"Population has {population.shape[1]} items, design {design.K}")
    rng = np.random.default_rng(seed)
    rows = sample_rows(population, n, rng)
    patterns = rng.choice(design.pattern_set.J, size=n, p=design.probs)
    observed = design.pattern_set.incidence[patterns].astype(bool)
    return ObservedDataset(rows, observed)


def deterministic_design(variant: str, K: int, n: int, n_full: int = 0) -> np.ndarray:
    """Observation mask of a fixed question order.

    The first n_full rows answer everything. The remaining rows of DET1 answer
    the first and the last item, those of DET2 the first two items.
    """
    if K < 2:
        raise ValueError(f"Deterministic orders need at least two items, got K={K}")
    if not 0 <= n_full <= n:
        raise ValueError(f"Need 0 <= n_full <= n, got n_full={n_full}, n={n}")
    variant = variant.upper()
    if variant == "DET1":
        items = [0, K - 1]
    elif variant == "DET2":
        items = [0, 1]
    else:
        raise ValueError(f"Unknown deterministic order {variant}")
    mask = np.zeros((n, K), dtype=bool)
    mask[:n_full] = True
    mask[n_full:, items] = True
    return mask
