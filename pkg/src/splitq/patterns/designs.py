"""Design distributions: probability vectors over the patterns of a pattern set."""
import logging
from typing import Sequence

import numpy as np

from splitq.exceptions import InvalidDesignError

from .space import Pattern, PatternSet, enumerate_patterns


logger = logging.getLogger(__name__)

__all__ = [
    "DesignDistribution",
    "srs_design",
    "point_mass",
    "item_inclusion",
    "symmetric_two_group_design",
]

SUM_TOLERANCE = 1e-9


class DesignDistribution:
    """Immutable probability vector over the patterns of a pattern set."""

    def __init__(self, pattern_set: PatternSet, probs: Sequence[float]):
        """Validate and store the probabilities.

        Sums within 1e-9 of one are renormalised so the stored vector sums to one
        up to rounding.
        """
        probs = np.array(probs, dtype=float)
        if probs.shape != (pattern_set.J,):
            raise InvalidDesignError(
                f"Expected {pattern_set.J} probabilities, got shape {probs.shape}"
            )
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise InvalidDesignError("Probabilities must be finite and non negative")
        total = probs.sum()
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidDesignError(f"Probabilities sum to {total}, not 1")
        probs = probs / total
        probs.setflags(write=False)
        self.pattern_set = pattern_set
        self.probs = probs

    @property
    def K(self) -> int:
        """Number of questions."""
        return self.pattern_set.K

    @property
    def m(self) -> int:
        """Items per respondent."""
        return self.pattern_set.m

    def prob_of(self, pattern: Pattern) -> float:
        """Probability of a single pattern."""
        return float(self.probs[self.pattern_set.position(pattern)])

    def mix(self, other: "DesignDistribution", alpha: float) -> "DesignDistribution":
        """Return alpha * self + (1 - alpha) * other."""
        if other.pattern_set != self.pattern_set:
            raise InvalidDesignError("Designs over different pattern sets cannot be mixed")
        return DesignDistribution(self.pattern_set, alpha * self.probs + (1 - alpha) * other.probs)

    def __repr__(self) -> str:
        """Short representation."""
        return f"DesignDistribution({self.pattern_set!r})"


def srs_design(pattern_set: PatternSet) -> DesignDistribution:
    """Uniform design: every pattern is chosen with probability 1/J."""
    if not pattern_set.is_complete:
        raise InvalidDesignError("The SRS design needs a fully enumerated pattern set")
    return DesignDistribution(pattern_set, np.full(pattern_set.J, 1.0 / pattern_set.J))


def point_mass(pattern_set: PatternSet, pattern: Pattern) -> DesignDistribution:
    """Design that always administers the same pattern."""
    probs = np.zeros(pattern_set.J)
    probs[pattern_set.position(pattern)] = 1.0
    return DesignDistribution(pattern_set, probs)


def item_inclusion(design: DesignDistribution) -> np.ndarray:
    """Probability that each item is administered, the sum over the patterns containing it."""
    return design.probs @ design.pattern_set.incidence


def symmetric_two_group_design(q: int, pi: float) -> DesignDistribution:
    """Pairs design over two groups of q items that puts mass pi on within-group pairs.

    Items 0..q-1 form the first group and q..2q-1 the second. Each within-group
    pair gets pi / (q (q - 1)) and each between-group pair (1 - pi) / q^2.
    """
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"pi must lie in [0, 1], got {pi}")
    if q < 2 and pi > 0:
        raise InvalidDesignError("With q < 2 there are no within-group pairs to put mass on")
    pattern_set = enumerate_patterns(2 * q, 2)
    index = pattern_set.index
    within = (index[:, 0] < q) == (index[:, 1] < q)
    probs = np.where(
        within,
        pi / (q * (q - 1)) if q > 1 else 0.0,
        (1.0 - pi) / q ** 2,
    )
    return DesignDistribution(pattern_set, probs)
