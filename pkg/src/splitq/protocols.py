"""Protocols used in splitq."""
from typing import Any, Tuple

import numpy as np
from typing_extensions import Protocol


__all__ = ["Criterion", "ParameterSampler"]


class Criterion(Protocol):
    """A design criterion over the probability vector of a fixed pattern set."""

    def value(self, probs: np.ndarray) -> float:
        """Evaluate the criterion."""
        ...

    def gradient(self, probs: np.ndarray) -> np.ndarray:
        """Gradient of the criterion with respect to the probability vector."""
        ...

    def evaluate(self, probs: np.ndarray) -> Tuple[float, np.ndarray]:
        """Value and gradient sharing a single factorisation."""
        ...

    def fisher(self, probs: np.ndarray) -> np.ndarray:
        """Information matrix of the design."""
        ...


class ParameterSampler(Protocol):
    """Draws model parameters from a prior."""

    def draw(self, rng: np.random.Generator) -> Any:
        """Draw a single parameter value."""
        ...
