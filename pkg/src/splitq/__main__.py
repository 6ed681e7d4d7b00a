"""Command line interface: design, simulate, evaluate and theory."""
import dataclasses
import json
import logging
import pathlib
import sys
from typing import List, Optional, Tuple

import click

from splitq.decorators import click_errors
from splitq.estimation import ESTIMATOR_REGISTRY, read_dataset, write_estimates
from splitq.exceptions import DataFormatError, ParameterError
from splitq.models import CRITERION_REGISTRY, PARAMS_REGISTRY
from splitq.optimize import (
    DEFAULT_SHRINKAGE,
    CriterionSpec,
    InverseWishartPrior,
    OptimizerOptions,
    optimize_design,
    shrinkage_set,
    write_report,
)
from splitq.patterns import (
    DesignDistribution,
    design_from_dict,
    enumerate_patterns,
    item_inclusion,
    srs_design,
)
from splitq.settings import load_settings
from splitq.simulation import (
    PROFILES,
    apply_profile,
    params_from_estimate,
    read_scenario,
    run_study,
    write_study_csv,
    write_study_json,
)
from splitq.theory import theory_curves, write_curves


logger = logging.getLogger(__name__)

MODELS = ["mvn", "zmvln"]
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def _floats(text: str, option: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(
            f"expected a comma separated list of numbers, got {text}", param_hint=option
        )


def _seed(seed: Optional[int]) -> int:
    return load_settings().seed if seed is None else seed


def _threads(threads: Optional[int]) -> int:
    return load_settings().threads if threads is None else threads


# Register CLI commands
@click.group()
@click.option("--log-level", default="WARNING", type=click.Choice(LOG_LEVELS), show_default=True)
def main(log_level):
    """Compute and evaluate A-optimal split questionnaire designs."""
    logging.basicConfig(
        level=log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


@main.command()
@click.argument("pilot", type=click.File("r"))
@click.option("--model", type=click.Choice(MODELS), default="mvn", show_default=True)
@click.option("--m", "m", type=int, required=True, help="Items administered per respondent.")
@click.option(
    "--variant",
    type=click.Choice(["local", "bayes", "minimax"]),
    default="local",
    show_default=True,
)
@click.option("--bayes-draws", type=int, default=200, show_default=True)
@click.option(
    "--nu",
    type=float,
    default=None,
    help="Inverse-Wishart degrees of freedom, the pilot size by default.",
)
@click.option(
    "--minimax-grid",
    default=",".join(str(s) for s in DEFAULT_SHRINKAGE),
    show_default=True,
    help="Correlation scaling factors of the minimax parameter set.",
)
@click.option("--seed", type=int, default=None)
@click.option("--threads", type=int, default=None)
@click.option("--include-trace", is_flag=True, help="Add the criterion trace to the report.")
@click.option("--out", type=click.File("w"), default="-", help="Design report json.")
@click.option("--estimates", type=click.File("w"), default=None, help="Pilot estimates json.")
@click_errors
def design(
    pilot,
    model,
    m,
    variant,
    bayes_draws,
    nu,
    minimax_grid,
    seed,
    threads,
    include_trace,
    out,
    estimates,
):
    """Estimate parameters from PILOT csv data and optimise the design."""
    data = read_dataset(pilot)
    pattern_set = enumerate_patterns(data.K, m)
    estimate = ESTIMATOR_REGISTRY.get_handler(model)(data, None, None)
    if estimates is not None:
        write_estimates(estimate, estimates)
    params = params_from_estimate(model, estimate, data.n)
    if variant == "local":
        spec = CriterionSpec.local(model, params)
    elif variant == "bayes":
        prior = InverseWishartPrior(params, float(data.n) if nu is None else nu)
        spec = CriterionSpec.bayes(model, prior, bayes_draws)
    else:
        factors = _floats(minimax_grid, "--minimax-grid")
        spec = CriterionSpec.minimax(model, shrinkage_set(params, factors))
    options = OptimizerOptions(threads=_threads(threads))
    result = optimize_design(spec, pattern_set, options, seed=_seed(seed))
    write_report(result, out, include_trace)

    criterion = CRITERION_REGISTRY.criterion_for(model, params, pattern_set)
    a_srs = criterion.value(srs_design(pattern_set).probs)
    a_opt = criterion.value(result.design.probs)
    click.echo(f"{variant} {model} design: K={data.K}, m={m}, {pattern_set.J} patterns", err=True)
    click.echo(f"criterion at the pilot estimate, SRS: {a_srs:.6f}", err=True)
    click.echo(f"criterion at the pilot estimate, optimised: {a_opt:.6f}", err=True)
    click.echo(f"RE_A: {a_srs / a_opt:.6f}", err=True)
    click.echo(f"status: {result.status} after {result.iterations} iterations", err=True)
    for warning in result.warnings:
        click.echo(f"warning: {warning}", err=True)


@main.command()
@click.argument("scenario", type=click.File("r"))
@click.option("--profile", type=click.Choice(sorted(PROFILES)), default="desk", show_default=True)
@click.option("--seed", type=int, default=None, help="Overrides the seed of the scenario.")
@click.option("--threads", type=int, default=None)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, writable=True),
    required=True,
    help="Output path without extension, .json and .csv are appended.",
)
@click_errors
def simulate(scenario, profile, seed, threads, out):
    """Run the Monte-Carlo study described by the SCENARIO yaml or json file."""
    study = apply_profile(read_scenario(scenario), profile)
    if seed is not None:
        study = dataclasses.replace(study, seed=seed)
    result = run_study(study, threads=_threads(threads))
    base = pathlib.Path(out)
    with open(base.with_suffix(".json"), "w") as f:
        write_study_json(result, f)
    with open(base.with_suffix(".csv"), "w") as f:
        write_study_csv(result, f)
    for summary in result.summaries:
        click.echo(f"{summary.name}: mse {summary.mse:.6g}, re_mse {summary.re_mse}", err=True)


@main.command()
@click.argument("design_file", type=click.File("r"))
@click.argument("params_file", type=click.File("r"))
@click.option("--model", type=click.Choice(MODELS), default="mvn", show_default=True)
@click.option("--out", type=click.File("w"), default="-")
@click_errors
def evaluate(design_file, params_file, model, out):
    """Evaluate the criterion of DESIGN_FILE at the parameters of PARAMS_FILE."""
    try:
        data = json.load(design_file)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"invalid design json at line {e.lineno}: {e.msg}") from e
    # design reports wrap the design
    design_data = data.get("design", data) if isinstance(data, dict) else data
    design: DesignDistribution = design_from_dict(design_data)
    params = PARAMS_REGISTRY.get_handler(model)(params_file)
    if params.K != design.K:
        raise ParameterError(f"Parameters have K={params.K}, design K={design.K}")
    criterion = CRITERION_REGISTRY.criterion_for(model, params, design.pattern_set)
    report = {
        "model": model,
        "criterion": criterion.value(design.probs),
        "item_inclusion": item_inclusion(design).tolist(),
        "item_variances": criterion.item_variances(design.probs).tolist(),
    }
    json.dump(report, out, indent=2)
    out.write("\n")


def _pairs(values: Tuple[str, ...]) -> List[Tuple[float, float]]:
    pairs = []
    for value in values:
        try:
            rho1, rho2 = (float(x) for x in value.split(":"))
        except ValueError:
            raise click.BadParameter(f"expected RHO1:RHO2, got {value}", param_hint="--rho")
        pairs.append((rho1, rho2))
    return pairs


@main.command()
@click.option("--q", "qs", default="2,4,8,16,64,256", show_default=True, help="Group sizes.")
@click.option(
    "--rho",
    "rhos",
    multiple=True,
    default=("0.8:0.2",),
    show_default=True,
    help="Within and between correlations as RHO1:RHO2, may be repeated.",
)
@click.option("--out", type=click.File("w"), default="-")
@click_errors
def theory(qs, rhos, out):
    """Closed-form curves for two groups of q questions."""
    sizes = [int(q) for q in _floats(qs, "--q")]
    write_curves(theory_curves(sizes, _pairs(rhos)), out)


if __name__ == "__main__":
    main(prog_name="python -m splitq")
