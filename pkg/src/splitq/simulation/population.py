"""Finite populations drawn from the structured response models."""
import logging
from typing import Any

import numpy as np

from splitq.models import MvnParams, zmvln_sample

from .scenario import StructuredPopSpec


logger = logging.getLogger(__name__)

__all__ = ["gen_population", "draw_responses"]


def draw_responses(params: Any, n: int, seed: Any) -> np.ndarray:
    """n response vectors from either model."""
    if isinstance(params, MvnParams):
        rng = np.random.default_rng(seed)
        chol = np.linalg.cholesky(params.sigma)
        return params.mu + rng.standard_normal((n, params.K)) @ chol.T
    return zmvln_sample(params, n, seed)


def gen_population(spec: StructuredPopSpec, seed: Any) -> np.ndarray:
    """N independent draws regarded as the population."""
    logger.info(f"generating a {spec.model} population of {spec.N} units with K={spec.K}")
    return draw_responses(spec.params(), spec.N, seed)
