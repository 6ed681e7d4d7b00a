"""Local, Bayes and minimax A-optimal designs."""
import concurrent.futures
import dataclasses
import json
import logging
import math
from typing import IO, Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from splitq.exceptions import ParameterError, SingularPatternError, UndefinedCriterionError
from splitq.models import CRITERION_REGISTRY
from splitq.patterns import DesignDistribution, GroupSymmetry, PatternSet, orbit_average
from splitq.patterns.serialization import design_to_dict
from splitq.protocols import Criterion
from splitq.settings import load_settings

from .options import CriterionSpec, OptimizerOptions
from .solver import SolverOutcome, minimize_on_simplex


logger = logging.getLogger(__name__)

__all__ = [
    "OptimizationResult",
    "optimize_design",
    "optimize_local",
    "optimize_bayes",
    "optimize_minimax",
    "write_report",
]

SMOOTHING_SCHEDULE = (10.0, 1e2, 1e3, 1e4, 1e5)
MAX_REJECTIONS_PER_DRAW = 100
SYMMETRY_SLACK = 1e-9


@dataclasses.dataclass
class OptimizationResult:
    """Optimised design and how the solver got there."""

    design: DesignDistribution
    criterion: float
    iterations: int
    converged: bool
    trace: List[float]
    variant: str
    model: str
    worst_index: Optional[int] = None
    member_values: Optional[List[float]] = None
    rejected_draws: int = 0
    warnings: List[str] = dataclasses.field(default_factory=list)

    @property
    def status(self) -> str:
        """Converged or unconverged."""
        return "converged" if self.converged else "unconverged"

    def to_dict(self, include_trace: bool = False) -> Dict[str, Any]:
        """Json friendly report."""
        report: Dict[str, Any] = {
            "variant": self.variant,
            "model": self.model,
            "criterion": self.criterion,
            "iterations": self.iterations,
            "converged": self.converged,
            "status": self.status,
            "design": design_to_dict(self.design),
            "warnings": list(self.warnings),
        }
        if self.worst_index is not None:
            report["worst_index"] = self.worst_index
            report["member_values"] = self.member_values
        if self.variant == "bayes":
            report["rejected_draws"] = self.rejected_draws
        if include_trace:
            report["trace"] = list(self.trace)
        return report


def write_report(result: OptimizationResult, writer: IO[str], include_trace: bool = False):
    """Write the optimizer report as json."""
    json.dump(result.to_dict(include_trace), writer, indent=2)
    writer.write("\n")


class _Evaluator:
    """Evaluates a list of criteria at the same probabilities, in parallel when asked."""

    def __init__(self, criteria: Sequence[Criterion], executor=None):
        self.criteria = list(criteria)
        self.executor = executor

    def __call__(self, probs: np.ndarray) -> List[Tuple[float, np.ndarray]]:
        if self.executor is None:
            return [criterion.evaluate(probs) for criterion in self.criteria]
        # map keeps the order of the criteria so reductions are reproducible
        return list(self.executor.map(lambda criterion: criterion.evaluate(probs), self.criteria))


def _executor(options: OptimizerOptions, members: int):
    if options.threads > 1 and members > 1:
        return concurrent.futures.ThreadPoolExecutor(max_workers=options.threads)
    return None


def _symmetric(
    outcome: SolverOutcome,
    pattern_set: PatternSet,
    symmetry: Optional[GroupSymmetry],
    objective: Callable[[np.ndarray], float],
) -> Tuple[np.ndarray, float]:
    """Replace the final iterate by its orbit average when it is no worse."""
    design = DesignDistribution(pattern_set, outcome.probs / outcome.probs.sum())
    if symmetry is None:
        return design.probs, outcome.value
    averaged = orbit_average(design, symmetry)
    try:
        value = objective(averaged.probs)
    except UndefinedCriterionError:
        logger.warning("criterion undefined at the orbit average, keeping the raw iterate")
        return design.probs, outcome.value
    if value <= outcome.value + SYMMETRY_SLACK * abs(outcome.value):
        return averaged.probs, value
    logger.warning("orbit averaging increases the criterion, keeping the raw iterate")
    return design.probs, outcome.value


def _criterion_warnings(criteria: Sequence[Criterion]) -> List[str]:
    warnings: List[str] = []
    for criterion in criteria:
        for message in getattr(criterion, "warnings", []):
            if message not in warnings:
                warnings.append(message)
    return warnings


def optimize_local(
    spec: CriterionSpec,
    pattern_set: PatternSet,
    options: Optional[OptimizerOptions] = None,
    symmetry: Optional[GroupSymmetry] = None,
) -> OptimizationResult:
    """Minimise the criterion at a plug-in parameter value, starting from SRS."""
    if spec.kind != "local":
        raise ValueError(f"optimize_local needs a point parameter, got a {spec.kind} spec")
    options = options or OptimizerOptions()
    criterion = CRITERION_REGISTRY.criterion_for(spec.model, spec.params, pattern_set)
    logger.info(f"local {spec.model} design over {pattern_set.J} patterns")
    outcome = minimize_on_simplex(criterion.evaluate, pattern_set.J, options)
    probs, value = _symmetric(outcome, pattern_set, symmetry, criterion.value)
    warnings = _criterion_warnings([criterion])
    if not outcome.converged:
        warnings.append(
            f"unconverged after {outcome.iterations} iterations, Frank-Wolfe gap {outcome.gap:.3g}"
        )
    return OptimizationResult(
        design=DesignDistribution(pattern_set, probs),
        criterion=value,
        iterations=outcome.iterations,
        converged=outcome.converged,
        trace=outcome.trace,
        variant="local",
        model=spec.model,
        warnings=warnings,
    )


def _prior_criteria(
    spec: CriterionSpec, pattern_set: PatternSet, seed: int
) -> Tuple[List[Criterion], int]:
    """Draw the fixed prior sample, resampling draws that are undefined at SRS."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    uniform = np.full(pattern_set.J, 1.0 / pattern_set.J)
    criteria: List[Criterion] = []
    rejected = 0
    while len(criteria) < spec.draws:
        params = spec.sampler.draw(rng)  # type: ignore
        try:
            criterion = CRITERION_REGISTRY.criterion_for(spec.model, params, pattern_set)
            criterion.value(uniform)
        except (UndefinedCriterionError, SingularPatternError, ParameterError) as e:
            rejected += 1
            logger.warning(f"rejecting prior draw {len(criteria) + rejected}: {e}")
            if rejected > MAX_REJECTIONS_PER_DRAW * spec.draws:
                raise UndefinedCriterionError(
                    f"criterion undefined for {rejected} prior draws at the uniform design"
                ) from e
            continue
        criteria.append(criterion)
    return criteria, rejected


def optimize_bayes(
    spec: CriterionSpec,
    pattern_set: PatternSet,
    options: Optional[OptimizerOptions] = None,
    seed: Optional[int] = None,
    symmetry: Optional[GroupSymmetry] = None,
) -> OptimizationResult:
    """Minimise the average criterion over a fixed seeded sample from the prior."""
    if spec.kind != "bayes":
        raise ValueError(f"optimize_bayes needs a prior sampler, got a {spec.kind} spec")
    options = options or OptimizerOptions()
    seed = load_settings().seed if seed is None else seed
    criteria, rejected = _prior_criteria(spec, pattern_set, seed)
    logger.info(f"bayes {spec.model} design over {pattern_set.J} patterns with {spec.draws} draws")
    executor = _executor(options, len(criteria))
    evaluate = _Evaluator(criteria, executor)

    def objective(probs: np.ndarray) -> Tuple[float, np.ndarray]:
        results = evaluate(probs)
        value = math.fsum(v for v, _ in results) / len(results)
        gradient = np.sum([g for _, g in results], axis=0) / len(results)
        return value, gradient

    try:
        outcome = minimize_on_simplex(objective, pattern_set.J, options)
        probs, value = _symmetric(outcome, pattern_set, symmetry, lambda p: objective(p)[0])
    finally:
        if executor is not None:
            executor.shutdown()
    warnings = _criterion_warnings(criteria)
    if rejected:
        warnings.append(f"{rejected} prior draws rejected and resampled")
    if not outcome.converged:
        warnings.append(
            f"unconverged after {outcome.iterations} iterations, Frank-Wolfe gap {outcome.gap:.3g}"
        )
    return OptimizationResult(
        design=DesignDistribution(pattern_set, probs),
        criterion=value,
        iterations=outcome.iterations,
        converged=outcome.converged,
        trace=outcome.trace,
        variant="bayes",
        model=spec.model,
        rejected_draws=rejected,
        warnings=warnings,
    )


def optimize_minimax(
    spec: CriterionSpec,
    pattern_set: PatternSet,
    options: Optional[OptimizerOptions] = None,
    symmetry: Optional[GroupSymmetry] = None,
) -> OptimizationResult:
    """Minimise the worst case of the criterion over a finite parameter set.

    The maximum is replaced by a log-sum-exp whose sharpness grows stage by
    stage, each stage warm started from the previous one. The best iterate by
    true worst case is returned and the trace records the best worst case so far.
    """
    if spec.kind != "minimax":
        raise ValueError(f"optimize_minimax needs a parameter set, got a {spec.kind} spec")
    options = options or OptimizerOptions()
    criteria = [
        CRITERION_REGISTRY.criterion_for(spec.model, params, pattern_set)
        for params in spec.params_set
    ]
    if len(criteria) == 1:
        local = optimize_local(
            CriterionSpec.local(spec.model, spec.params_set[0]), pattern_set, options, symmetry
        )
        local.variant = "minimax"
        local.worst_index = 0
        local.member_values = [local.criterion]
        return local

    logger.info(
        f"minimax {spec.model} design over {pattern_set.J} patterns, {len(criteria)} members"
    )
    executor = _executor(options, len(criteria))
    evaluate = _Evaluator(criteria, executor)
    uniform = np.full(pattern_set.J, 1.0 / pattern_set.J)
    reference = max(v for v, _ in evaluate(uniform))
    last_values: List[float] = []
    best: Dict[str, Any] = {"value": math.inf, "probs": uniform}
    trace: List[float] = []

    def record(probs: np.ndarray, _: float):
        worst = max(last_values)
        if worst < best["value"]:
            best["value"], best["probs"] = worst, probs
        if options.keep_trace:
            trace.append(best["value"])

    def smoothed(sharpness: float):
        def objective(probs: np.ndarray) -> Tuple[float, np.ndarray]:
            results = evaluate(probs)
            values = np.array([v for v, _ in results])
            last_values[:] = values.tolist()
            scaled = sharpness * values / reference
            top = scaled.max()
            weights = np.exp(scaled - top)
            total = weights.sum()
            value = reference * (top + np.log(total)) / sharpness
            gradient = np.einsum("s,sj->j", weights / total, np.array([g for _, g in results]))
            return float(value), gradient

        return objective

    stage_options = dataclasses.replace(options, keep_trace=False)
    start = None
    iterations = 0
    try:
        for sharpness in SMOOTHING_SCHEDULE:
            outcome = minimize_on_simplex(
                smoothed(sharpness), pattern_set.J, stage_options, start=start, callback=record
            )
            iterations += outcome.iterations
            start = outcome.probs
        final = dataclasses.replace(outcome, probs=best["probs"], value=best["value"])
        probs, _ = _symmetric(
            final, pattern_set, symmetry, lambda p: max(v for v, _ in evaluate(p))
        )
        member_values = [v for v, _ in evaluate(probs)]
    finally:
        if executor is not None:
            executor.shutdown()
    worst_index = int(np.argmax(member_values))
    warnings = _criterion_warnings(criteria)
    if not outcome.converged:
        warnings.append(f"unconverged after {iterations} iterations")
    return OptimizationResult(
        design=DesignDistribution(pattern_set, probs),
        criterion=member_values[worst_index],
        iterations=iterations,
        converged=outcome.converged,
        trace=trace,
        variant="minimax",
        model=spec.model,
        worst_index=worst_index,
        member_values=member_values,
        warnings=warnings,
    )


def optimize_design(
    spec: CriterionSpec,
    pattern_set: PatternSet,
    options: Optional[OptimizerOptions] = None,
    seed: Optional[int] = None,
    symmetry: Optional[GroupSymmetry] = None,
) -> OptimizationResult:
    """Dispatch on the kind of parameter source of the spec."""
    if spec.kind == "local":
        return optimize_local(spec, pattern_set, options, symmetry)
    if spec.kind == "bayes":
        return optimize_bayes(spec, pattern_set, options, seed, symmetry)
    return optimize_minimax(spec, pattern_set, options, symmetry)
