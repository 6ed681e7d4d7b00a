"""Registries of criterion factories and parameter readers keyed by model tag."""
from typing import IO, Any, Callable

from splitq.patterns import PatternSet
from splitq.protocols import Criterion
from splitq.registry import NamedRegistry


__all__ = ["CRITERION_REGISTRY", "PARAMS_REGISTRY", "CriterionFactory", "ParamsReader"]


CriterionFactory = Callable[[Any, PatternSet], Criterion]
ParamsReader = Callable[[IO[str]], Any]


class CriterionRegistry(NamedRegistry[CriterionFactory]):
    """Registry of criterion factories."""

    def criterion_for(self, model: str, params: Any, pattern_set: PatternSet) -> Criterion:
        """Build the criterion of the given model."""
        return self.get_handler(model)(params, pattern_set)


CRITERION_REGISTRY = CriterionRegistry()
PARAMS_REGISTRY: NamedRegistry[ParamsReader] = NamedRegistry()
