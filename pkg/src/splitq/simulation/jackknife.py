"""Delete-one jackknife over Monte-Carlo replicates."""
import math

import numpy as np


__all__ = ["jackknife_se_re"]


def jackknife_se_re(numerator: np.ndarray, denominator: np.ndarray) -> float:
    """Jackknife standard error of sum(numerator) / sum(denominator)."""
    numerator = np.asarray(numerator, dtype=float)
    denominator = np.asarray(denominator, dtype=float)
    R = numerator.size
    if R < 2 or denominator.shape != numerator.shape:
        raise ValueError(f"Need two matching series of at least two replicates, got {R}")
    leave_out_num = math.fsum(numerator) - numerator
    leave_out_den = math.fsum(denominator) - denominator
    if np.any(leave_out_den == 0):
        raise ValueError("A delete-one denominator is zero")
    ratios = leave_out_num / leave_out_den
    return float(np.sqrt((R - 1) / R * np.sum((ratios - ratios.mean()) ** 2)))
