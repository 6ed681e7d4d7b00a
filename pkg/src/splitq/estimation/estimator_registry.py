"""Registry of the estimators of the population means keyed by model tag."""
from typing import Callable, Optional

from splitq.registry import NamedRegistry

from .data import ObservedDataset
from .result import EstimationResult


__all__ = ["ESTIMATOR_REGISTRY", "Estimator"]


Estimator = Callable[[ObservedDataset, Optional[float], Optional[int]], EstimationResult]

ESTIMATOR_REGISTRY: NamedRegistry[Estimator] = NamedRegistry()
