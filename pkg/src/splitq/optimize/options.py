"""Optimizer options and the description of the criterion to optimise."""
import dataclasses
from typing import Any, Optional, Tuple

from splitq.protocols import ParameterSampler
from splitq.settings import load_settings


__all__ = ["OptimizerOptions", "CriterionSpec", "STEP_RULES"]

# adaptive: the accepted step is doubled for the next iteration
# reset: every iteration restarts the backtracking from the initial step
STEP_RULES = ("adaptive", "reset")


@dataclasses.dataclass(frozen=True)
class OptimizerOptions:
    """Stopping rules and step policy of the simplex solver.

    Fields left as None take their value from the library settings.
    """

    max_iters: Optional[int] = None
    rel_tol: Optional[float] = None
    floor: Optional[float] = None
    step_rule: str = "adaptive"
    initial_step: float = 1.0
    keep_trace: bool = True
    threads: Optional[int] = None

    def __post_init__(self):
        """Fill the defaults and validate."""
        settings = load_settings()
        for name in ("max_iters", "rel_tol", "floor", "threads"):
            if getattr(self, name) is None:
                object.__setattr__(self, name, getattr(settings, name))
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be positive, got {self.max_iters}")
        if self.rel_tol <= 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.floor < 0:
            raise ValueError(f"floor must be non negative, got {self.floor}")
        if self.step_rule not in STEP_RULES:
            raise ValueError(f"Unknown step rule {self.step_rule}, expected one of {STEP_RULES}")
        if self.initial_step <= 0:
            raise ValueError(f"initial_step must be positive, got {self.initial_step}")
        if self.threads < 1:
            raise ValueError(f"threads must be positive, got {self.threads}")


@dataclasses.dataclass(frozen=True)
class CriterionSpec:
    """Model tag plus one source of parameters: a point, a prior or a finite set."""

    model: str
    params: Any = None
    sampler: Optional[ParameterSampler] = None
    draws: int = 200
    params_set: Tuple[Any, ...] = ()

    def __post_init__(self):
        """Check exactly one parameter source is given."""
        object.__setattr__(self, "model", self.model.lower())
        object.__setattr__(self, "params_set", tuple(self.params_set))
        sources = [self.params is not None, self.sampler is not None, bool(self.params_set)]
        if sum(sources) != 1:
            raise ValueError("Give exactly one of params, sampler or params_set")
        if self.sampler is not None and self.draws < 1:
            raise ValueError(f"Bayes designs need at least one draw, got {self.draws}")

    @property
    def kind(self) -> str:
        """Either local, bayes or minimax."""
        if self.params is not None:
            return "local"
        if self.sampler is not None:
            return "bayes"
        return "minimax"

    @classmethod
    def local(cls, model: str, params: Any) -> "CriterionSpec":
        """Criterion at a plug-in parameter value."""
        return cls(model, params=params)

    @classmethod
    def bayes(cls, model: str, sampler: ParameterSampler, draws: int = 200) -> "CriterionSpec":
        """Prior average of the criterion over a fixed sample of draws."""
        return cls(model, sampler=sampler, draws=draws)

    @classmethod
    def minimax(cls, model: str, params_set) -> "CriterionSpec":
        """Worst case of the criterion over a finite parameter set."""
        params_set = tuple(params_set)
        if not params_set:
            raise ValueError("The minimax parameter set must not be empty")
        return cls(model, params_set=params_set)
