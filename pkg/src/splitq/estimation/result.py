"""Estimates returned by the estimators."""
import dataclasses
import json
from typing import IO, Any, Dict, List, Optional

import numpy as np


__all__ = ["EstimationResult", "write_estimates"]


def _json_array(values: Optional[np.ndarray]) -> Any:
    """Nested lists with NaN markers written as null."""
    if values is None:
        return None
    return np.where(np.isnan(values), None, values).tolist()


@dataclasses.dataclass
class EstimationResult:
    """Model scale estimates, plus the zero-inflation part for zero-inflated data."""

    mu_hat: np.ndarray
    sigma_hat: np.ndarray
    loglik: List[float]
    converged: bool
    iterations: int
    lambda_hat: Optional[np.ndarray] = None
    eta_hat: Optional[np.ndarray] = None
    eta_literal: Optional[np.ndarray] = None
    warnings: List[str] = dataclasses.field(default_factory=list)

    @property
    def target(self) -> np.ndarray:
        """The estimated population means: eta when present, mu otherwise."""
        return self.mu_hat if self.eta_hat is None else self.eta_hat

    def to_dict(self) -> Dict[str, Any]:
        """Json friendly representation."""
        data: Dict[str, Any] = {
            "mu": _json_array(self.mu_hat),
            "sigma": _json_array(self.sigma_hat),
            "converged": self.converged,
            "iterations": self.iterations,
            "loglik": list(self.loglik),
            "warnings": list(self.warnings),
        }
        if self.eta_hat is not None:
            data["lambda"] = _json_array(self.lambda_hat)
            data["eta"] = _json_array(self.eta_hat)
            data["eta_literal"] = _json_array(self.eta_literal)
        return data


def write_estimates(result: EstimationResult, writer: IO[str]) -> None:
    """Write the estimates as json."""
    json.dump(result.to_dict(), writer, indent=2)
    writer.write("\n")
