"""Desk scale Monte-Carlo studies. Each runs for minutes."""
import pytest

from splitq.simulation import Scenario, StructuredPopSpec, run_study


pytestmark = pytest.mark.slow


def test_simulated_efficiency_matches_the_criterion():
    population = StructuredPopSpec(g=2, q=8, rho1=0.8, rho2=0.4)
    scenario = Scenario(population, n=1000, m=2, designs=("SRS", "OPT"), replications=200)
    opt = run_study(scenario).summary("OPT")
    assert opt.re_a == pytest.approx(1.1360, rel=1e-3)
    assert abs(opt.re_mse - opt.re_a) <= 3 * opt.se_re


def test_optimal_design_beats_srs_and_fixed_orders():
    population = StructuredPopSpec(g=6, q=4, rho1=0.8, rho2=0.2)
    scenario = Scenario(
        population,
        n=50 * population.K,
        m=2,
        designs=("SRS", "OPT", "DET2", "FULL"),
        replications=200,
        setup="equal-budget",
        n_full=50,
    )
    result = run_study(scenario)
    srs, opt, det2 = (result.summary(name) for name in ("SRS", "OPT", "DET2"))
    assert opt.mse < srs.mse < det2.mse
    assert opt.re_mse - 1 > 2 * opt.se_re


def test_global_designs_are_not_worse_than_srs():
    population = StructuredPopSpec(g=2, q=4, rho1=0.8, rho2=0.2)
    scenario = Scenario(
        population,
        n=1000,
        m=2,
        designs=("SRS", "OPT", "BAYES", "MINIMAX"),
        replications=200,
        bayes_draws=50,
    )
    result = run_study(scenario)
    for name in ("OPT", "BAYES", "MINIMAX"):
        summary = result.summary(name)
        assert summary.re_mse > 1 - 3 * summary.se_re
