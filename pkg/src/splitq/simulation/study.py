"""Monte-Carlo comparison of designs on a finite population."""
import concurrent.futures
import dataclasses
import logging
import math
from typing import Any, Dict, List, Optional

import numpy as np

from splitq.estimation import (
    ESTIMATOR_REGISTRY,
    EstimationResult,
    ObservedDataset,
    em_mvn,
    imputed_mean,
)
from splitq.exceptions import EstimationError, StudyAbortedError
from splitq.models import CRITERION_REGISTRY, MvnParams, ZmvlnParams
from splitq.optimize import (
    CriterionSpec,
    OptimizerOptions,
    UniformCorrelationPrior,
    correlation_grid,
    optimize_bayes,
    optimize_local,
    optimize_minimax,
)
from splitq.patterns import DesignDistribution, GroupSymmetry, enumerate_patterns, srs_design
from splitq.settings import load_settings

from .jackknife import jackknife_se_re
from .population import draw_responses, gen_population
from .sampling import apply_design, deterministic_design, sample_rows
from .scenario import DESIGN_NAMES, DETERMINISTIC, Scenario


logger = logging.getLogger(__name__)

__all__ = ["ResolvedDesign", "DesignSummary", "StudyResult", "run_study", "params_from_estimate"]

MAX_FAILURE_RATE = 0.01
# spawn keys of the independent random streams of a study
POPULATION_STREAM = 0
PILOT_STREAM = 1
REPLICATE_STREAM = 2
PRIOR_STREAM = 3


@dataclasses.dataclass
class ResolvedDesign:
    """A design of the study ready to be applied to samples."""

    name: str
    n: int
    distribution: Optional[DesignDistribution] = None
    mask: Optional[np.ndarray] = None
    criterion: Optional[float] = None


@dataclasses.dataclass
class DesignSummary:
    """Aggregated errors of one design over the replicates."""

    name: str
    n: int
    mse: float
    mse_sum: float
    failures: int
    criterion: Optional[float] = None
    re_mse: Optional[float] = None
    re_a: Optional[float] = None
    se_re: Optional[float] = None


@dataclasses.dataclass
class StudyResult:
    """Per-design summaries plus the per-replicate squared error sums they come from."""

    scenario: Scenario
    summaries: List[DesignSummary]
    squared_errors: Dict[str, np.ndarray]
    warnings: List[str] = dataclasses.field(default_factory=list)

    def summary(self, name: str) -> DesignSummary:
        """Summary of the named design."""
        for summary in self.summaries:
            if summary.name == name:
                return summary
        raise KeyError(f"Design {name} is not part of the study")


def params_from_estimate(model: str, result: EstimationResult, n: int) -> Any:
    """Plug-in model parameters from an estimate.

    Nonzero rates are kept half an observation away from 0 and 1.
    """
    if model == "mvn":
        return MvnParams(mu=result.mu_hat, sigma=result.sigma_hat)
    bound = 0.5 / n
    lam = np.clip(result.lambda_hat, bound, 1 - bound)
    return ZmvlnParams(lam=lam, mu=result.mu_hat, sigma=result.sigma_hat)


def _seed(scenario: Scenario, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(scenario.seed, spawn_key=key)


def _estimate(model: str, data: ObservedDataset) -> np.ndarray:
    return ESTIMATOR_REGISTRY.get_handler(model)(data, None, None).target


def _pilot_params(scenario: Scenario) -> Any:
    population = scenario.population
    shift = scenario.pilot_shift if scenario.setup == "shifted-pilot" else 0.0
    pilot = draw_responses(
        population.params(mean_shift=shift), scenario.n_pilot, _seed(scenario, PILOT_STREAM)
    )
    model = population.model
    result = ESTIMATOR_REGISTRY.get_handler(model)(ObservedDataset.complete(pilot), None, None)
    return params_from_estimate(model, result, scenario.n_pilot)


def resolve_designs(
    scenario: Scenario,
    true_params: Any,
    pilot_params: Optional[Any],
    options: OptimizerOptions,
) -> List[ResolvedDesign]:
    """Build every design of the scenario once for the whole study."""
    population = scenario.population
    model = population.model
    pattern_set = None
    if set(scenario.designs) & {"SRS", "OPT", "BAYES", "MINIMAX"}:
        pattern_set = enumerate_patterns(scenario.K, scenario.m)
    template = pilot_params if scenario.opt_source == "pilot" else true_params
    symmetry = None
    if scenario.opt_source == "true":
        symmetry = GroupSymmetry.blocks(population.g, population.q, model == "mvn")
    resolved = []
    for name in scenario.designs:
        n = scenario.sample_size(name)
        if name == "SRS":
            design = ResolvedDesign(name, n, srs_design(pattern_set))
        elif name == "OPT":
            result = optimize_local(
                CriterionSpec.local(model, template), pattern_set, options, symmetry
            )
            design = ResolvedDesign(name, n, result.design)
        elif name == "BAYES":
            prior = UniformCorrelationPrior(template, population.g, population.q)
            result = optimize_bayes(
                CriterionSpec.bayes(model, prior, scenario.bayes_draws),
                pattern_set,
                options,
                seed=int(_seed(scenario, PRIOR_STREAM).generate_state(1)[0]),
            )
            design = ResolvedDesign(name, n, result.design)
        elif name == "MINIMAX":
            members = correlation_grid(
                template, population.g, population.q, scenario.minimax_values
            )
            result = optimize_minimax(CriterionSpec.minimax(model, members), pattern_set, options)
            design = ResolvedDesign(name, n, result.design)
        elif name in DETERMINISTIC:
            mask = deterministic_design(name, scenario.K, n, scenario.det_full_rows)
            design = ResolvedDesign(name, n, mask=mask)
        else:
            design = ResolvedDesign(name, n, mask=np.ones((n, scenario.K), dtype=bool))
        if design.distribution is not None:
            criterion = CRITERION_REGISTRY.criterion_for(model, true_params, pattern_set)
            design.criterion = criterion.value(design.distribution.probs)
        resolved.append(design)
    return resolved


def _replicate(
    scenario: Scenario,
    population: np.ndarray,
    truth: np.ndarray,
    designs: List[ResolvedDesign],
    pilot_params: Optional[Any],
    replicate: int,
) -> np.ndarray:
    """Squared error sums of every design in one replicate, NaN where estimation failed."""
    model = scenario.population.model
    errors = np.full(len(designs), np.nan)
    for i, design in enumerate(designs):
        seed = _seed(scenario, REPLICATE_STREAM, replicate, DESIGN_NAMES.index(design.name))
        try:
            if design.distribution is not None:
                data = apply_design(population, design.n, design.distribution, seed)
                estimate = _estimate(model, data)
            else:
                rng = np.random.default_rng(seed)
                data = ObservedDataset(sample_rows(population, design.n, rng), design.mask)
                if design.name in DETERMINISTIC:
                    if scenario.det_full_rows > 0:
                        fitted = em_mvn(data)
                        params = MvnParams(mu=fitted.mu_hat, sigma=fitted.sigma_hat)
                    else:
                        params = pilot_params
                    estimate = imputed_mean(data, params, scenario.impute_draws, rng)
                else:
                    estimate = _estimate(model, data)
        except (EstimationError, np.linalg.LinAlgError) as e:
            logger.warning(f"replicate {replicate} failed for {design.name}: {e}")
            continue
        if np.all(np.isfinite(estimate)):
            errors[i] = math.fsum((estimate - truth) ** 2)
    return errors


def _summaries(
    scenario: Scenario, designs: List[ResolvedDesign], errors: np.ndarray
) -> List[DesignSummary]:
    names = [d.name for d in designs]
    srs = names.index("SRS") if "SRS" in names else None
    summaries = []
    for i, design in enumerate(designs):
        ok = np.isfinite(errors[:, i])
        used = int(ok.sum())
        total = math.fsum(errors[ok, i])
        summary = DesignSummary(
            name=design.name,
            n=design.n,
            mse=total / (used * scenario.K) if used else math.nan,
            mse_sum=total / used if used else math.nan,
            failures=len(ok) - used,
            criterion=design.criterion,
        )
        if srs is not None:
            both = ok & np.isfinite(errors[:, srs])
            if both.any():
                denominator = math.fsum(errors[both, i])
                summary.re_mse = math.fsum(errors[both, srs]) / denominator
                if both.sum() >= 2:
                    summary.se_re = jackknife_se_re(errors[both, srs], errors[both, i])
            if design.criterion is not None and designs[srs].criterion is not None:
                summary.re_a = designs[srs].criterion / design.criterion
        summaries.append(summary)
    return summaries


def run_study(
    scenario: Scenario,
    threads: Optional[int] = None,
    options: Optional[OptimizerOptions] = None,
) -> StudyResult:
    """Run every replicate of the scenario and aggregate the errors of every design.

    Results depend only on the scenario, never on the number of threads.
    """
    threads = load_settings().threads if threads is None else threads
    options = options or OptimizerOptions(threads=threads)
    model = scenario.population.model
    logger.info(f"starting study {scenario.name or '<unnamed>'} with {scenario.replications} reps")
    population = gen_population(scenario.population, _seed(scenario, POPULATION_STREAM))
    truth = population.mean(axis=0)
    true_params = scenario.population.params()
    pilot_params = _pilot_params(scenario) if scenario.needs_pilot else None
    designs = resolve_designs(scenario, true_params, pilot_params, options)

    def replicate(r: int) -> np.ndarray:
        return _replicate(scenario, population, truth, designs, pilot_params, r)

    reps = range(scenario.replications)
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
            # map returns results in replicate order
            errors = np.array(list(executor.map(replicate, reps)))
    else:
        errors = np.array([replicate(r) for r in reps])

    warnings = []
    for i, design in enumerate(designs):
        failures = int(np.isnan(errors[:, i]).sum())
        if failures > MAX_FAILURE_RATE * scenario.replications:
            msg = f"{failures} of {scenario.replications} replicates failed for {design.name}"
            logger.error(msg)
            raise StudyAbortedError(msg)
        if failures:
            warnings.append(f"{failures} replicates failed for {design.name}")
    logger.info(f"study {scenario.name or '<unnamed>'} finished for {model} data")
    return StudyResult(
        scenario=scenario,
        summaries=_summaries(scenario, designs, errors),
        squared_errors={d.name: errors[:, i] for i, d in enumerate(designs)},
        warnings=warnings,
    )
