"""Matrix helpers: vech bookkeeping, duplication matrices and Cholesky inverses.

vech stacks the columns of the lower triangle including the diagonal, so for
K=2 vech(S) = (s11, s21, s22).
"""
import functools
from typing import Optional

import numpy as np
from scipy import linalg


__all__ = [
    "vech_positions",
    "vech",
    "unvech",
    "duplication_matrix",
    "spd_inverse",
    "batched_spd_inverse",
    "reciprocal_condition",
]


@functools.lru_cache(maxsize=64)
def _vech_positions(K: int) -> np.ndarray:
    positions = np.zeros((K, K), dtype=np.intp)
    pos = 0
    for col in range(K):
        for row in range(col, K):
            positions[row, col] = positions[col, row] = pos
            pos += 1
    positions.setflags(write=False)
    return positions


def vech_positions(K: int) -> np.ndarray:
    """K x K symmetric array with the vech position of every (row, col) entry."""
    return _vech_positions(int(K))


def vech(matrix: np.ndarray) -> np.ndarray:
    """Lower triangle of a square matrix, column by column."""
    K = matrix.shape[0]
    rows, cols = np.triu_indices(K)
    # triu of the transpose walks the lower triangle column by column
    return np.asarray(matrix).T[rows, cols]


def unvech(vector: np.ndarray) -> np.ndarray:
    """Symmetric matrix from its vech."""
    size = len(vector)
    K = int(round((np.sqrt(8 * size + 1) - 1) / 2))
    if K * (K + 1) // 2 != size:
        raise ValueError(f"{size} is not a triangular number")
    return np.asarray(vector)[vech_positions(K)]


def duplication_matrix(K: int) -> np.ndarray:
    """The K^2 x K(K+1)/2 0/1 matrix D with D vech(S) = vec(S) for symmetric S."""
    if K < 1:
        raise ValueError(f"K must be positive, got {K}")
    positions = vech_positions(K)
    D = np.zeros((K * K, K * (K + 1) // 2))
    for col in range(K):
        for row in range(K):
            # vec stacks columns
            D[row + col * K, positions[row, col]] = 1.0
    return D


def spd_inverse(matrix: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive definite matrix through its Cholesky factor.

    Raises numpy.linalg.LinAlgError when the factorisation fails.
    """
    factor = linalg.cho_factor(matrix, lower=True, check_finite=False)
    inverse = linalg.cho_solve(factor, np.eye(matrix.shape[0]), check_finite=False)
    return (inverse + inverse.T) / 2


def batched_spd_inverse(stack: np.ndarray) -> np.ndarray:
    """Inverses of a stack of symmetric positive definite matrices.

    Raises numpy.linalg.LinAlgError whose `index` attribute points at the
    first matrix of the stack that is not positive definite.
    """
    try:
        chol = np.linalg.cholesky(stack)
    except np.linalg.LinAlgError as e:
        e.index = first_non_spd(stack)  # type: ignore
        raise
    identity = np.broadcast_to(np.eye(stack.shape[-1]), stack.shape)
    chol_inv = np.linalg.solve(chol, identity)
    return np.swapaxes(chol_inv, -1, -2) @ chol_inv


def first_non_spd(stack: np.ndarray) -> Optional[int]:
    """Index of the first matrix in the stack without a Cholesky factor."""
    for i, matrix in enumerate(stack):
        try:
            np.linalg.cholesky(matrix)
        except np.linalg.LinAlgError:
            return i
    return None


def reciprocal_condition(matrix: np.ndarray) -> float:
    """Smallest over largest eigenvalue of a symmetric matrix, zero or below when singular."""
    eigenvalues = np.linalg.eigvalsh(matrix)
    largest = eigenvalues[-1]
    if largest <= 0:
        return 0.0
    return float(eigenvalues[0] / largest)
