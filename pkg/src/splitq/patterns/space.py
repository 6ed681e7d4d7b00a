"""Patterns of administered questions and the design space they span."""
import dataclasses
import itertools
import logging
from typing import Iterable, Optional, Tuple

import numpy as np
from scipy import special

from splitq.exceptions import DesignSpaceTooLargeError
from splitq.settings import load_settings


logger = logging.getLogger(__name__)

__all__ = ["Pattern", "PatternSet", "enumerate_patterns"]


@dataclasses.dataclass(frozen=True)
class Pattern:
    """The set of question indices administered together to one respondent."""

    items: Tuple[int, ...]

    def __post_init__(self):
        """Validate the index set."""
        items = tuple(int(i) for i in self.items)
        if not items:
            raise ValueError("A pattern needs at least one item")
        if any(b <= a for a, b in zip(items, items[1:])):
            raise ValueError(f"Pattern items must be strictly increasing, got {items}")
        if items[0] < 0:
            raise ValueError(f"Pattern items must be non negative, got {items}")
        object.__setattr__(self, "items", items)

    @classmethod
    def of(cls, items: Iterable[int]) -> "Pattern":
        """Build a pattern from any iterable of distinct indices."""
        return cls(tuple(sorted(set(int(i) for i in items))))

    def __len__(self) -> int:
        """Number of administered items."""
        return len(self.items)

    def __contains__(self, item: object) -> bool:
        """Check whether the item is administered."""
        return item in self.items

    def __str__(self) -> str:
        """Render 1-based, the way questionnaires are usually numbered."""
        return "{" + ",".join(str(i + 1) for i in self.items) + "}"


class PatternSet:
    """An ordered collection of distinct patterns with m items out of K questions."""

    def __init__(self, K: int, m: int, patterns: Iterable[Pattern]):
        """Create and validate the pattern set."""
        if K < 1 or m < 1 or m > K:
            raise ValueError(f"Need 1 <= m <= K, got K={K}, m={m}")
        self.K = int(K)
        self.m = int(m)
        self.patterns: Tuple[Pattern, ...] = tuple(patterns)
        if not self.patterns:
            raise ValueError("A pattern set needs at least one pattern")
        for pattern in self.patterns:
            if len(pattern) != self.m:
                raise ValueError(f"Pattern {pattern} does not have {self.m} items")
            if pattern.items[-1] >= self.K:
                raise ValueError(f"Pattern {pattern} has items outside [0, {self.K})")
        if len(set(self.patterns)) != len(self.patterns):
            raise ValueError("Patterns must be distinct")
        self._index = np.array([p.items for p in self.patterns], dtype=np.intp)
        self._index.setflags(write=False)

    @property
    def J(self) -> int:
        """Number of patterns."""
        return len(self.patterns)

    @property
    def index(self) -> np.ndarray:
        """J x m array of the item indices of every pattern."""
        return self._index

    @property
    def incidence(self) -> np.ndarray:
        """J x K 0/1 matrix, row j flags the items of pattern j."""
        incidence = np.zeros((self.J, self.K))
        np.put_along_axis(incidence, self._index, 1.0, axis=1)
        return incidence

    @property
    def is_complete(self) -> bool:
        """Whether every size-m subset is present."""
        return self.J == special.comb(self.K, self.m, exact=True)

    def position(self, pattern: Pattern) -> int:
        """Position of a pattern in the set."""
        return self.patterns.index(pattern)

    def __len__(self) -> int:
        """Number of patterns."""
        return self.J

    def __iter__(self):
        """Iterate over the patterns."""
        return iter(self.patterns)

    def __eq__(self, other: object) -> bool:
        """Pattern sets are equal when they hold the same patterns in the same order."""
        if not isinstance(other, PatternSet):
            return NotImplemented
        return (self.K, self.m, self.patterns) == (other.K, other.m, other.patterns)

    def __hash__(self) -> int:
        """Hash on the patterns."""
        return hash((self.K, self.m, self.patterns))

    def __repr__(self) -> str:
        """Short representation."""
        return f"PatternSet(K={self.K}, m={self.m}, J={self.J})"


def enumerate_patterns(K: int, m: int, cap: Optional[int] = None) -> PatternSet:
    """Enumerate every size-m subset of {0, ..., K-1} in lexicographic order."""
    if K < 1 or m < 1 or m > K:
        raise ValueError(f"Need 1 <= m <= K, got K={K}, m={m}")
    cap = load_settings().pattern_cap if cap is None else cap
    count = special.comb(K, m, exact=True)
    if count > cap:
        msg = f"design space too large: C({K},{m}) = {count} patterns exceeds the cap {cap}"
        logger.error(msg)
        raise DesignSpaceTooLargeError(msg)
    return PatternSet(K, m, (Pattern(items) for items in itertools.combinations(range(K), m)))
