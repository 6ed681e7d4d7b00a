import io
import pathlib

import numpy as np
import pytest

from splitq.exceptions import DataFormatError, ParameterError
from splitq.models import MvnParams, ZmvlnParams
from splitq.simulation import (
    Scenario,
    StructuredPopSpec,
    apply_profile,
    read_scenario,
    scenario_from_dict,
)


SCENARIO_YAML = """
name: two-by-two
population:
  g: 2
  q: 2
  rho1: 0.8
  rho2: 0.2
  N: 5000
n: 200
m: 2
designs: [srs, opt]
replications: 50
"""


@pytest.fixture
def population():
    return StructuredPopSpec(g=2, q=2, rho1=0.8, rho2=0.2, N=1000)


class TestStructuredPopSpec:
    def test_params(self, population):
        params = population.params()
        assert isinstance(params, MvnParams)
        assert population.K == 4
        np.testing.assert_allclose(params.mu, [1.0, 1.0, 2.0, 2.0])

    def test_mean_shift(self, population):
        shifted = population.params(mean_shift=0.2)
        np.testing.assert_allclose(shifted.mu, [0.8, 0.8, 2.2, 2.2])

    def test_zmvln(self):
        spec = StructuredPopSpec(g=2, q=2, rho1=0.8, rho2=0.2, model="ZMVLN", lambdas=(0.6, 0.8))
        params = spec.params()
        assert isinstance(params, ZmvlnParams)
        np.testing.assert_allclose(params.lam, [0.6, 0.6, 0.8, 0.8])

    @pytest.mark.parametrize(
        "fields",
        [
            {"model": "poisson"},
            {"model": "zmvln", "lambdas": (0.5,)},
            {"model": "zmvln", "lambdas": (0.5, 1.0)},
            {"N": 0},
            {"rho1": 0.2, "rho2": 0.8},
        ],
    )
    def test_invalid(self, fields):
        base = {"g": 2, "q": 2, "rho1": 0.8, "rho2": 0.2}
        with pytest.raises(ParameterError):
            StructuredPopSpec(**{**base, **fields})


class TestScenario:
    def test_designs_are_upper_cased(self, population):
        assert Scenario(population, n=100, m=2, designs=("srs", "opt")).designs == ("SRS", "OPT")

    @pytest.mark.parametrize(
        "fields",
        [
            {"designs": ("SRS", "RANDOM")},
            {"designs": ("SRS", "SRS")},
            {"designs": ()},
            {"n": 1001},
            {"m": 5},
            {"replications": 0},
            {"setup": "unknown"},
            {"opt_source": "guess"},
            {"designs": ("SRS", "DET1")},
        ],
    )
    def test_invalid(self, population, fields):
        with pytest.raises(ValueError):
            Scenario(population, **{"n": 100, "m": 2, **fields})

    def test_deterministic_designs_need_normal_data(self):
        population = StructuredPopSpec(2, 2, 0.8, 0.2, model="zmvln", lambdas=(0.5, 0.5))
        with pytest.raises(ValueError, match="normal"):
            Scenario(population, n=10, m=2, designs=("SRS", "DET1"), setup="equal-budget")

    def test_shifted_pilot_uses_the_pilot(self, population):
        scenario = Scenario(population, n=100, m=2, setup="shifted-pilot")
        assert scenario.opt_source == "pilot"
        assert scenario.needs_pilot

    def test_sample_sizes(self, population):
        scenario = Scenario(
            population,
            n=100,
            m=2,
            designs=("SRS", "OPT", "DET1", "FULL"),
            setup="equal-budget",
            n_full=20,
        )
        assert scenario.sample_size("SRS") == 100
        assert scenario.sample_size("FULL") == 50
        assert scenario.sample_size("DET1") == 20 + (200 - 80) // 2
        assert scenario.det_full_rows == 20

    def test_standard_sample_sizes(self, population):
        scenario = Scenario(population, n=100, m=2, designs=("SRS", "FULL"))
        assert scenario.sample_size("FULL") == 100
        assert scenario.det_full_rows == 0


class TestProfiles:
    def test_desk_scales_down(self):
        population = StructuredPopSpec(2, 2, 0.8, 0.2, N=1_000_000)
        scenario = Scenario(population, n=1000, m=2, replications=1000)
        desk = apply_profile(scenario, "desk")
        assert desk.population.N == 100_000
        assert desk.n == 500
        assert desk.replications == 200

    def test_paper_keeps_the_scenario(self, population):
        scenario = Scenario(population, n=100, m=2)
        assert apply_profile(scenario, "paper") is scenario

    def test_unknown(self, population):
        with pytest.raises(ValueError):
            apply_profile(Scenario(population, n=100, m=2), "cluster")


class TestReadScenario:
    def test_yaml(self):
        scenario = read_scenario(io.StringIO(SCENARIO_YAML))
        assert scenario.name == "two-by-two"
        assert scenario.population.N == 5000
        assert scenario.designs == ("SRS", "OPT")
        assert scenario.seed == 2016

    @pytest.mark.parametrize(
        "text", ["population: [1, 2", "- just\n- a list\n", "n: 100\nm: 2\n"]
    )
    def test_invalid_files(self, text):
        with pytest.raises(DataFormatError):
            read_scenario(io.StringIO(text))

    def test_invalid_fields(self):
        data = {"population": {"g": 2, "q": 2, "rho1": 0.8, "rho2": 0.2}, "n": 10, "m": 9}
        with pytest.raises(DataFormatError, match="invalid scenario"):
            scenario_from_dict(data)

    def test_unknown_key(self):
        data = {"population": {"g": 2, "q": 2, "rho1": 0.8, "rho2": 0.2}, "n": 10, "m": 2}
        with pytest.raises(DataFormatError):
            scenario_from_dict({**data, "colour": "red"})


EXAMPLE_SCENARIOS = sorted(
    (pathlib.Path(__file__).parents[3] / "extras" / "scenarios").glob("*.yml")
)


@pytest.mark.parametrize("path", EXAMPLE_SCENARIOS, ids=lambda p: p.stem)
def test_example_scenarios(path):
    with open(path) as f:
        scenario = apply_profile(read_scenario(f), "desk")
    assert scenario.replications == 200
