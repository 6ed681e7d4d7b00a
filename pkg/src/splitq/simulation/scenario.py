"""Monte-Carlo study scenarios and their yaml / json form."""
import dataclasses
import logging
from typing import IO, Any, Dict, Tuple, Union

import numpy as np
import yaml

from splitq.exceptions import DataFormatError, ParameterError
from splitq.models import MvnParams, ZmvlnParams, group_means, structured_sigma
from splitq.optimize import DEFAULT_CORRELATIONS


logger = logging.getLogger(__name__)

__all__ = [
    "StructuredPopSpec",
    "Scenario",
    "DESIGN_NAMES",
    "SETUPS",
    "PROFILES",
    "apply_profile",
    "scenario_from_dict",
    "read_scenario",
]

DESIGN_NAMES = ("SRS", "OPT", "BAYES", "MINIMAX", "DET1", "DET2", "FULL")
DETERMINISTIC = ("DET1", "DET2")
# standard: every design samples n respondents
# equal-budget: every design observes the same number of cells as the split designs
# shifted-pilot: OPT comes from a pilot drawn from mean shifted population
SETUPS = ("standard", "equal-budget", "shifted-pilot")
MODELS = ("mvn", "zmvln")


@dataclasses.dataclass(frozen=True)
class StructuredPopSpec:
    """Population of g groups of q items with the block structured covariance."""

    g: int
    q: int
    rho1: float
    rho2: float
    model: str = "mvn"
    lambdas: Tuple[float, ...] = ()
    N: int = 100_000

    def __post_init__(self):
        """Validate the population."""
        object.__setattr__(self, "model", self.model.lower())
        object.__setattr__(self, "lambdas", tuple(float(p) for p in self.lambdas))
        if self.model not in MODELS:
            raise ParameterError(f"Unknown model {self.model}, expected one of {MODELS}")
        if self.model == "zmvln":
            if len(self.lambdas) != self.g:
                raise ParameterError(f"Need one nonzero probability per group, got {self.lambdas}")
            if any(not 0 < p < 1 for p in self.lambdas):
                raise ParameterError("Nonzero probabilities must lie strictly between 0 and 1")
        if self.N < 1:
            raise ParameterError(f"N must be positive, got {self.N}")
        structured_sigma(self.g, self.q, self.rho1, self.rho2)

    @property
    def K(self) -> int:
        """Number of items."""
        return self.g * self.q

    def params(self, mean_shift: float = 0.0) -> Union[MvnParams, ZmvlnParams]:
        """Model parameters; mean_shift moves the first half of the items down and the rest up."""
        mu = group_means(self.g, self.q)
        if mean_shift:
            half = self.K // 2
            mu = mu + np.where(np.arange(self.K) < half, -mean_shift, mean_shift)
        sigma = structured_sigma(self.g, self.q, self.rho1, self.rho2)
        if self.model == "mvn":
            return MvnParams(mu=mu, sigma=sigma)
        return ZmvlnParams(lam=np.repeat(self.lambdas, self.q), mu=mu, sigma=sigma)


@dataclasses.dataclass(frozen=True)
class Scenario:
    """A Monte-Carlo study: population, sample sizes, designs and replications."""

    population: StructuredPopSpec
    n: int
    m: int
    designs: Tuple[str, ...] = ("SRS", "OPT")
    replications: int = 1000
    seed: int = 2016
    setup: str = "standard"
    opt_source: str = "true"
    n_pilot: int = 100
    pilot_shift: float = 0.2
    n_full: int = 50
    bayes_draws: int = 200
    minimax_values: Tuple[float, ...] = DEFAULT_CORRELATIONS
    impute_draws: int = 20
    name: str = ""

    def __post_init__(self):
        """Validate the scenario."""
        designs = tuple(d.upper() for d in self.designs)
        object.__setattr__(self, "designs", designs)
        object.__setattr__(self, "minimax_values", tuple(self.minimax_values))
        unknown = set(designs) - set(DESIGN_NAMES)
        if unknown:
            raise ValueError(f"Unknown designs {sorted(unknown)}, expected some of {DESIGN_NAMES}")
        if not designs or len(set(designs)) != len(designs):
            raise ValueError("Designs must be a non empty list without repetitions")
        if not 1 <= self.n <= self.population.N:
            raise ValueError(f"Need 1 <= n <= N, got n={self.n}, N={self.population.N}")
        if not 1 <= self.m <= self.population.K:
            raise ValueError(f"Need 1 <= m <= K, got m={self.m}")
        if self.replications < 1:
            raise ValueError(f"Need at least one replication, got {self.replications}")
        if self.setup not in SETUPS:
            raise ValueError(f"Unknown setup {self.setup}, expected one of {SETUPS}")
        if self.opt_source not in ("true", "pilot"):
            raise ValueError(f"opt_source must be true or pilot, got {self.opt_source}")
        if self.population.model != "mvn" and set(designs) & set(DETERMINISTIC):
            raise ValueError("Deterministic order designs are only defined for normal data")
        if self.setup == "shifted-pilot" and self.opt_source != "pilot":
            object.__setattr__(self, "opt_source", "pilot")
        if (
            set(designs) & set(DETERMINISTIC)
            and self.setup != "equal-budget"
            and not self.needs_pilot
        ):
            raise ValueError(
                "Deterministic order designs need full rows or a pilot to impute from"
            )
        if self.needs_pilot and self.n_pilot < 2:
            raise ValueError(f"Pilot samples need at least two rows, got {self.n_pilot}")

    @property
    def needs_pilot(self) -> bool:
        """Whether a pilot sample is drawn."""
        return self.opt_source == "pilot"

    @property
    def K(self) -> int:
        """Number of items."""
        return self.population.K

    def sample_size(self, design: str) -> int:
        """Respondents sampled per replicate for the given design."""
        if self.setup != "equal-budget":
            return self.n
        budget = self.n * self.m
        if design == "FULL":
            return max(1, budget // self.K)
        if design in DETERMINISTIC:
            return self.n_full + max(0, budget - self.n_full * self.K) // 2
        return self.n

    @property
    def det_full_rows(self) -> int:
        """Fully observed rows at the top of a deterministic order sample."""
        return self.n_full if self.setup == "equal-budget" else 0


PROFILES: Dict[str, Dict[str, Any]] = {
    "desk": {"max_N": 100_000, "max_replications": 200, "n_divisor": 2},
    "paper": {},
}


def apply_profile(scenario: Scenario, profile: str) -> Scenario:
    """Scale a scenario down to the desk profile or keep it as is for the paper profile."""
    if profile not in PROFILES:
        raise ValueError(f"Unknown profile {profile}, expected one of {sorted(PROFILES)}")
    rules = PROFILES[profile]
    if not rules:
        return scenario
    N = min(scenario.population.N, rules["max_N"])
    population = dataclasses.replace(scenario.population, N=N)
    return dataclasses.replace(
        scenario,
        population=population,
        n=min(max(1, scenario.n // rules["n_divisor"]), N),
        replications=min(scenario.replications, rules["max_replications"]),
    )


def scenario_from_dict(data: Dict[str, Any]) -> Scenario:
    """Build a scenario; the population fields live under the population key."""
    try:
        fields = dict(data)
        population = StructuredPopSpec(**fields.pop("population"))
        for key in ("designs", "minimax_values"):
            if key in fields:
                fields[key] = tuple(fields[key])
        return Scenario(population=population, **fields)
    except (KeyError, TypeError, ValueError) as e:
        logger.error("Error while parsing the scenario")
        raise DataFormatError(f"invalid scenario: {e}") from e


def read_scenario(reader: IO[str]) -> Scenario:
    """Read a scenario from yaml or json."""
    try:
        data = yaml.safe_load(reader)
    except yaml.YAMLError as e:
        raise DataFormatError(f"invalid scenario file: {e}") from e
    if not isinstance(data, dict):
        raise DataFormatError("scenario file must hold a mapping")
    return scenario_from_dict(data)
