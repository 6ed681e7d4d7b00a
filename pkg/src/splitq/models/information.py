"""Block-diagonal design information and the A-criterion built on it.

Both response models produce an information matrix that is a sum over patterns
of p_j times per-pattern contributions, and is block diagonal across parameter
groups. Each block is described by the positions its per-pattern contributions
touch and the Jacobian rows of the quantity of interest on that block, so the
A-criterion is the sum over blocks of tr(C_b F_b^-1 C_b^T).
"""
import dataclasses
import logging
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg as sla

from splitq.exceptions import InvalidDesignError, UncoveredItemError, UndefinedCriterionError

from .linalg import reciprocal_condition


logger = logging.getLogger(__name__)

__all__ = ["InformationBlock", "BlockCriterion", "RCOND_THRESHOLD"]

RCOND_THRESHOLD = 1e-12


@dataclasses.dataclass(frozen=True)
class InformationBlock:
    """One diagonal block of the design information.

    index[j] lists the block coordinates touched by pattern j and local[j] holds
    the per-observation contribution of pattern j on those coordinates.
    transform is the Jacobian of the quantity of interest with respect to the
    block coordinates.
    """

    name: str
    dim: int
    index: np.ndarray
    local: np.ndarray
    transform: np.ndarray

    def __post_init__(self):
        """Check the shapes agree."""
        J, width = self.index.shape
        if self.local.shape != (J, width, width):
            raise ValueError(
                f"Block {self.name}: local contributions have shape {self.local.shape}, "
                f"expected {(J, width, width)}"
            )
        if self.transform.shape[1] != self.dim:
            raise ValueError(f"Block {self.name}: transform has {self.transform.shape[1]} columns")

    @property
    def touched(self) -> np.ndarray:
        """Block coordinates the quantity of interest depends on."""
        return np.flatnonzero(np.any(self.transform != 0, axis=0))

    def assemble(self, probs: np.ndarray) -> np.ndarray:
        """Sum of p_j times the local contributions, scattered into a dim x dim matrix."""
        J, width = self.index.shape
        rows = np.broadcast_to(self.index[:, :, None], (J, width, width))
        cols = np.broadcast_to(self.index[:, None, :], (J, width, width))
        flat = (rows * self.dim + cols).ravel()
        weights = (probs[:, None, None] * self.local).ravel()
        matrix = np.bincount(flat, weights=weights, minlength=self.dim * self.dim)
        matrix = matrix.reshape(self.dim, self.dim)
        return (matrix + matrix.T) / 2


class BlockCriterion:
    """A-criterion over a design's block-diagonal information matrix."""

    def __init__(self, blocks: Sequence[InformationBlock], incidence: np.ndarray):
        """Build the criterion from its blocks and the J x K pattern incidence."""
        self.blocks: Tuple[InformationBlock, ...] = tuple(blocks)
        self.incidence = incidence
        self.J = incidence.shape[0]
        for block in self.blocks:
            if block.index.shape[0] != self.J:
                raise ValueError(f"Block {block.name} does not cover {self.J} patterns")

    def _check(self, probs: np.ndarray) -> np.ndarray:
        probs = np.asarray(probs, dtype=float)
        if probs.shape != (self.J,):
            raise InvalidDesignError(f"Expected {self.J} probabilities, got shape {probs.shape}")
        return probs

    def _check_coverage(self, probs: np.ndarray):
        inclusion = probs @ self.incidence
        uncovered = np.flatnonzero(inclusion <= 0)
        if uncovered.size:
            raise UncoveredItemError(int(uncovered[0]))

    def _left_factor(self, block: InformationBlock, probs: np.ndarray) -> np.ndarray:
        """C F^-1 for one block.

        Coordinates the transform never touches are profiled out through the
        Schur complement; only the profiled matrix has to be well conditioned.
        A nuisance coordinate without any information leaves the criterion undefined.
        """
        matrix = block.assemble(probs)
        C = block.transform
        touched = block.touched
        if touched.size == 0:
            return np.zeros(C.shape)
        if touched.size == block.dim:
            self._check_condition(block, matrix)
            factor = sla.cho_factor(matrix, lower=True, check_finite=False)
            return sla.cho_solve(factor, C.T, check_finite=False).T
        rest = np.setdiff1d(np.arange(block.dim), touched)
        nuisance = matrix[np.ix_(rest, rest)]
        if np.any(np.diag(nuisance) <= 0):
            raise UndefinedCriterionError(
                f"criterion undefined: {block.name} information is singular"
                " (uninformed coordinates)"
            )
        cross = matrix[np.ix_(rest, touched)]
        try:
            nuisance_factor = sla.cho_factor(nuisance, lower=True, check_finite=False)
        except np.linalg.LinAlgError as e:
            raise UndefinedCriterionError(
                f"criterion undefined: {block.name} nuisance information is singular"
            ) from e
        profiled = matrix[np.ix_(touched, touched)] - cross.T @ sla.cho_solve(
            nuisance_factor, cross, check_finite=False
        )
        profiled = (profiled + profiled.T) / 2
        self._check_condition(block, profiled)
        factor = sla.cho_factor(profiled, lower=True, check_finite=False)
        weights = sla.cho_solve(factor, C[:, touched].T, check_finite=False).T
        left = np.zeros_like(C, dtype=float)
        left[:, touched] = weights
        left[:, rest] = -sla.cho_solve(nuisance_factor, cross @ weights.T, check_finite=False).T
        return left

    @staticmethod
    def _check_condition(block: InformationBlock, matrix: np.ndarray):
        rcond = reciprocal_condition(matrix)
        if rcond < RCOND_THRESHOLD:
            raise UndefinedCriterionError(
                f"criterion undefined: {block.name} information is singular (rcond {rcond:.3g})"
            )

    def _left_factors(self, probs: np.ndarray) -> List[np.ndarray]:
        self._check_coverage(probs)
        return [self._left_factor(block, probs) for block in self.blocks]

    def fisher(self, probs: np.ndarray) -> np.ndarray:
        """The full block-diagonal information matrix."""
        probs = self._check(probs)
        self._check_coverage(probs)
        return sla.block_diag(*(block.assemble(probs) for block in self.blocks))

    def value(self, probs: np.ndarray) -> float:
        """Sum over blocks of tr(C F^-1 C^T)."""
        probs = self._check(probs)
        total = 0.0
        for block, left in zip(self.blocks, self._left_factors(probs)):
            total += float(np.einsum("ka,ka->", left, block.transform))
        return total

    def evaluate(self, probs: np.ndarray) -> Tuple[float, np.ndarray]:
        """Criterion value and its gradient with respect to the probabilities.

        The derivative along p_j is -tr(C F^-1 F_j F^-1 C^T), with F_j the
        contribution of pattern j.
        """
        probs = self._check(probs)
        total = 0.0
        gradient = np.zeros(self.J)
        for block, left in zip(self.blocks, self._left_factors(probs)):
            total += float(np.einsum("ka,ka->", left, block.transform))
            sandwich = left.T @ left
            local_sandwich = sandwich[block.index[:, :, None], block.index[:, None, :]]
            gradient -= np.einsum("jab,jab->j", block.local, local_sandwich)
        return total, gradient

    def gradient(self, probs: np.ndarray) -> np.ndarray:
        """Gradient of the criterion with respect to the probabilities."""
        return self.evaluate(probs)[1]

    def item_variances(self, probs: np.ndarray) -> np.ndarray:
        """Per-observation asymptotic variance of each component of the quantity of interest."""
        probs = self._check(probs)
        variances = 0.0
        for block, left in zip(self.blocks, self._left_factors(probs)):
            variances = variances + np.einsum("ka,ka->k", left, block.transform)
        return np.asarray(variances)
