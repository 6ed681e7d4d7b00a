"""Closed-form results for two groups of q questions.

Within a group items correlate at rho1 and across groups at rho2. Designs
that administer pairs and put mass pi on within-group pairs, spread evenly,
have the closed-form criterion implemented by `a_pi`.
"""
import concurrent.futures
import dataclasses
import logging
from typing import IO, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import optimize

from splitq.exceptions import ParameterError
from splitq.models import MvnParams, group_means, structured_eigenvalues, structured_sigma
from splitq.settings import load_settings


logger = logging.getLogger(__name__)

__all__ = [
    "TwoGroupSpec",
    "PlugInSummary",
    "a_pi",
    "pi_opt",
    "pi_srs",
    "re_limit",
    "relative_efficiency",
    "estimate_correlations",
    "plug_in_stability",
    "theory_curves",
    "write_curves",
    "CURVE_COLUMNS",
]

CURVE_COLUMNS = ["q", "rho1", "rho2", "pi_srs", "pi_opt", "A_srs", "A_opt", "re", "re_limit"]


@dataclasses.dataclass(frozen=True)
class TwoGroupSpec:
    """Two groups of q items with within correlation rho1 and between correlation rho2."""

    q: int
    rho1: float
    rho2: float

    def __post_init__(self):
        """Check the standing assumptions and positive definiteness."""
        if self.q < 2:
            raise ParameterError(f"Need at least two items per group, got q={self.q}")
        if not 0 < abs(self.rho2) < abs(self.rho1) < 1:
            raise ParameterError(
                f"Need 0 < |rho2| < |rho1| < 1, got rho1={self.rho1}, rho2={self.rho2}"
            )
        if np.any(structured_eigenvalues(2, self.q, self.rho1, self.rho2) <= 0):
            raise ParameterError(f"{self} implies a covariance that is not positive definite")

    @property
    def sigma(self) -> np.ndarray:
        """The implied 2q x 2q covariance."""
        return structured_sigma(2, self.q, self.rho1, self.rho2)

    def params(self) -> MvnParams:
        """Normal parameters with the group mean profile."""
        return MvnParams(mu=group_means(2, self.q), sigma=self.sigma)


def a_pi(spec: TwoGroupSpec, pi: float) -> float:
    """Closed-form A-criterion of the symmetric pairs design with within mass pi.

    The information has eigenvalue a on within-group contrasts and u +- q c on
    the group totals, so A = 2 (q - 1) / a + 2 u / (u^2 - q^2 c^2).
    """
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"pi must lie in [0, 1], got {pi}")
    q, rho1, rho2 = spec.q, spec.rho1, spec.rho2
    within = 1.0 / (q * (1 - rho1 ** 2))
    between = 1.0 / (q * (1 - rho2 ** 2))
    a = pi * within + (1 - pi) * between + pi * rho1 * within / (q - 1)
    u = pi * (1 - rho1) * within + (1 - pi) * between
    qc_squared = ((1 - pi) * rho2 * between) ** 2
    denominator = u ** 2 - qc_squared
    if a <= 0 or denominator <= 0:
        msg = f"closed form undefined for {spec} at pi={pi}"
        logger.error(msg)
        raise ParameterError(msg)
    return 2 * (q - 1) / a + 2 * u / denominator


def pi_srs(q: int) -> float:
    """Within-group mass of the SRS pairs design, (q - 1) / (2q - 1)."""
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    return (q - 1) / (2 * q - 1)


def pi_opt(spec: TwoGroupSpec) -> float:
    """Within-group mass minimising the closed-form criterion over [0, 1]."""
    result = optimize.minimize_scalar(
        lambda pi: a_pi(spec, pi), bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-10}
    )
    candidates = [(result.fun, float(result.x)), (a_pi(spec, 0.0), 0.0), (a_pi(spec, 1.0), 1.0)]
    return min(candidates)[1]


def re_limit(rho1: float, rho2: float) -> float:
    """Limit of A(pi_srs) / A(pi_opt) as the group size grows."""
    if not abs(rho2) <= abs(rho1) < 1:
        raise ValueError(f"Need |rho2| <= |rho1| < 1, got rho1={rho1}, rho2={rho2}")
    within = 1 / (1 - rho1 ** 2)
    between = 1 / (1 - rho2 ** 2)
    return 2 * within / (within + between)


def relative_efficiency(spec: TwoGroupSpec, pi: Optional[float] = None) -> float:
    """A(pi_srs) / A(pi), by default at the optimal pi."""
    pi = pi_opt(spec) if pi is None else pi
    return a_pi(spec, pi_srs(spec.q)) / a_pi(spec, pi)


def estimate_correlations(sample: np.ndarray, q: int) -> Tuple[float, float]:
    """Average pairwise sample correlation within and between the two groups."""
    correlation = np.corrcoef(sample, rowvar=False)
    labels = np.repeat([0, 1], q)
    upper = np.triu(np.ones_like(correlation, dtype=bool), k=1)
    same = labels[:, None] == labels[None, :]
    return float(correlation[upper & same].mean()), float(correlation[upper & ~same].mean())


@dataclasses.dataclass
class PlugInSummary:
    """Spread of the plug-in optimal pi over pilot replications."""

    pi_hats: np.ndarray
    ratios: np.ndarray
    flagged: List[int]

    @property
    def mean_pi(self) -> float:
        """Mean plug-in pi over the usable replications."""
        return float(np.nanmean(self.pi_hats))

    @property
    def sd_pi(self) -> float:
        """Standard deviation of the plug-in pi over the usable replications."""
        return float(np.nanstd(self.pi_hats, ddof=1))

    @property
    def mean_ratio(self) -> float:
        """Mean of A(pi_srs) / A(plug-in pi) under the true correlations."""
        return float(np.nanmean(self.ratios))

    @property
    def sd_ratio(self) -> float:
        """Standard deviation of the efficiency ratio."""
        return float(np.nanstd(self.ratios, ddof=1))


def _plug_in_replication(
    spec: TwoGroupSpec, n_pilot: int, seed: int, replication: int
) -> Tuple[float, float]:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(replication,)))
    chol = np.linalg.cholesky(spec.sigma)
    sample = rng.standard_normal((n_pilot, 2 * spec.q)) @ chol.T
    rho1, rho2 = estimate_correlations(sample, spec.q)
    estimated = TwoGroupSpec(spec.q, rho1, rho2)
    pi_hat = pi_opt(estimated)
    return pi_hat, relative_efficiency(spec, pi_hat)


def plug_in_stability(
    spec: TwoGroupSpec,
    n_pilot: int,
    replications: int,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> PlugInSummary:
    """Simulate pilot samples and summarise the plug-in optimal pi.

    Replications whose estimates break |rho2| < |rho1| are flagged and left out
    of the summary statistics.
    """
    if n_pilot < 30:
        raise ValueError(f"n_pilot must be at least 30, got {n_pilot}")
    settings = load_settings()
    seed = settings.seed if seed is None else seed
    threads = settings.threads if threads is None else threads
    pi_hats = np.full(replications, np.nan)
    ratios = np.full(replications, np.nan)
    flagged = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
        futures = [
            executor.submit(_plug_in_replication, spec, n_pilot, seed, r)
            for r in range(replications)
        ]
        for r, future in enumerate(futures):
            try:
                pi_hats[r], ratios[r] = future.result()
            except ParameterError as e:
                logger.warning(f"plug-in replication {r} flagged: {e}")
                flagged.append(r)
    return PlugInSummary(pi_hats, ratios, flagged)


def theory_curves(
    qs: Iterable[int], correlations: Iterable[Tuple[float, float]]
) -> pd.DataFrame:
    """One row per (q, rho1, rho2) with SRS and optimal within-group masses and criteria."""
    rows = []
    for rho1, rho2 in correlations:
        limit = re_limit(rho1, rho2)
        for q in qs:
            spec = TwoGroupSpec(q, rho1, rho2)
            srs, opt = pi_srs(q), pi_opt(spec)
            a_srs, a_opt = a_pi(spec, srs), a_pi(spec, opt)
            rows.append((q, rho1, rho2, srs, opt, a_srs, a_opt, a_srs / a_opt, limit))
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def write_curves(curves: pd.DataFrame, writer: IO[str]) -> None:
    """Write the curves as csv."""
    curves.to_csv(writer, index=False, float_format="%.10g")
