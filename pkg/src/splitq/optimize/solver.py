"""Exponentiated gradient descent on the probability simplex with Armijo backtracking."""
import dataclasses
import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from splitq.exceptions import UndefinedCriterionError

from .options import OptimizerOptions


logger = logging.getLogger(__name__)

__all__ = ["SolverOutcome", "minimize_on_simplex", "frank_wolfe_gap"]

Objective = Callable[[np.ndarray], Tuple[float, np.ndarray]]

ARMIJO_SLOPE = 1e-4
GAP_TOLERANCE = 1e-9
STALL_GAP_TOLERANCE = 1e-6
MIN_STEP = 1e-20
MAX_STEP = 1e6


@dataclasses.dataclass
class SolverOutcome:
    """Final iterate of the solver."""

    probs: np.ndarray
    value: float
    gradient: np.ndarray
    iterations: int
    converged: bool
    trace: List[float]

    @property
    def gap(self) -> float:
        """Frank-Wolfe gap of the final iterate."""
        return frank_wolfe_gap(self.probs, self.gradient)


def frank_wolfe_gap(probs: np.ndarray, gradient: np.ndarray) -> float:
    """g.p - min_j g_j, zero exactly at stationary points of the simplex."""
    return float(gradient @ probs - gradient.min())


def _floored(probs: np.ndarray, floor: float) -> np.ndarray:
    probs = np.maximum(probs, floor)
    return probs / probs.sum()


def _try(objective: Objective, probs: np.ndarray) -> Tuple[float, Optional[np.ndarray]]:
    try:
        return objective(probs)
    except UndefinedCriterionError:
        return math.inf, None


def minimize_on_simplex(
    objective: Objective,
    J: int,
    options: OptimizerOptions,
    start: Optional[np.ndarray] = None,
    callback: Optional[Callable[[np.ndarray, float], None]] = None,
) -> SolverOutcome:
    """Minimise a smooth convex objective over the probability simplex.

    Each step multiplies the current probabilities by exp(-t d) with d the
    gradient centred on its design average and scaled to unit sup norm, floors
    and renormalises, and halves t until the Armijo condition holds. Iterates
    that make the objective undefined count as infinite.
    """
    probs = np.full(J, 1.0 / J) if start is None else _floored(np.asarray(start, float), 0.0)
    value, gradient = objective(probs)
    trace = [value] if options.keep_trace else []
    if callback is not None:
        callback(probs, value)
    step = options.initial_step
    converged = False
    iterations = 0
    for iterations in range(1, options.max_iters + 1):
        gap = frank_wolfe_gap(probs, gradient)
        scale = abs(value)
        if gap <= GAP_TOLERANCE * scale:
            converged = True
            break
        direction = gradient - gradient @ probs
        direction /= np.max(np.abs(direction))
        if options.step_rule == "reset":
            step = options.initial_step
        while True:
            # shifting by the minimum keeps every exponent non positive
            tilt = np.exp(-step * (direction - direction.min()))
            candidate = _floored(probs * tilt, options.floor)
            new_value, new_gradient = _try(objective, candidate)
            if new_value <= value + ARMIJO_SLOPE * gradient @ (candidate - probs):
                break
            step /= 2
            if step < MIN_STEP:
                break
        if step < MIN_STEP:
            converged = gap <= STALL_GAP_TOLERANCE * scale
            logger.info(f"line search stalled after {iterations} iterations, gap {gap:.3g}")
            break
        relative_change = (value - new_value) / scale
        probs, value, gradient = candidate, new_value, new_gradient
        if options.keep_trace:
            trace.append(value)
        if callback is not None:
            callback(probs, value)
        if options.step_rule == "adaptive":
            step = min(2 * step, MAX_STEP)
        if relative_change < options.rel_tol:
            if frank_wolfe_gap(probs, gradient) <= STALL_GAP_TOLERANCE * abs(value):
                converged = True
                break
    else:
        converged = frank_wolfe_gap(probs, gradient) <= GAP_TOLERANCE * abs(value)
    if not converged:
        logger.warning(f"optimisation did not converge after {iterations} iterations")
    return SolverOutcome(probs, value, gradient, iterations, converged, trace)
