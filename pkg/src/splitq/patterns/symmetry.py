"""Symmetries of block structured questionnaires."""
import dataclasses
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .designs import DesignDistribution


__all__ = ["GroupSymmetry", "orbit_average"]


@dataclasses.dataclass(frozen=True)
class GroupSymmetry:
    """Items split into groups whose members are interchangeable.

    When `exchangeable_groups` is set, whole groups may also be permuted, which
    requires every group to have the same size.
    """

    labels: Tuple[int, ...]
    exchangeable_groups: bool = True

    def __post_init__(self):
        """Validate the group sizes."""
        object.__setattr__(self, "labels", tuple(int(g) for g in self.labels))
        if self.exchangeable_groups and len(set(np.bincount(self.labels))) > 1:
            raise ValueError("Exchangeable groups must all have the same size")

    @classmethod
    def blocks(cls, g: int, q: int, exchangeable_groups: bool = True) -> "GroupSymmetry":
        """g consecutive groups of q items."""
        return cls(tuple(np.repeat(np.arange(g), q)), exchangeable_groups)

    @property
    def K(self) -> int:
        """Number of items."""
        return len(self.labels)

    def signature(self, items: Sequence[int]) -> Tuple[int, ...]:
        """Per-group item counts of a pattern, the invariant that labels its orbit."""
        counts = np.bincount([self.labels[i] for i in items], minlength=max(self.labels) + 1)
        if self.exchangeable_groups:
            return tuple(sorted(counts.tolist(), reverse=True))
        return tuple(counts.tolist())


def orbit_average(design: DesignDistribution, symmetry: GroupSymmetry) -> DesignDistribution:
    """Average the probabilities over the orbits of the symmetry group."""
    if symmetry.K != design.K:
        raise ValueError(f"Symmetry over {symmetry.K} items applied to a design over {design.K}")
    orbits: Dict[Tuple[int, ...], List[int]] = {}
    for j, pattern in enumerate(design.pattern_set):
        orbits.setdefault(symmetry.signature(pattern.items), []).append(j)
    probs = np.array(design.probs)
    for members in orbits.values():
        probs[members] = probs[members].mean()
    return DesignDistribution(design.pattern_set, probs)
