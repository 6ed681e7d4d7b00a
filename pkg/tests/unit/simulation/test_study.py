import io
import json

import numpy as np
import pandas as pd
import pytest

from splitq.exceptions import EstimationError, StudyAbortedError
from splitq.simulation import (
    CSV_COLUMNS,
    Scenario,
    StructuredPopSpec,
    run_study,
    study_to_dict,
    write_study_csv,
    write_study_json,
)


@pytest.fixture
def population():
    return StructuredPopSpec(g=2, q=2, rho1=0.8, rho2=0.2, N=2000)


@pytest.fixture
def scenario(population):
    return Scenario(
        population, n=100, m=2, designs=("SRS", "OPT", "FULL"), replications=20, name="tiny"
    )


@pytest.fixture
def result(scenario):
    return run_study(scenario, threads=1)


class TestRunStudy:
    def test_summaries(self, result):
        assert [s.name for s in result.summaries] == ["SRS", "OPT", "FULL"]
        assert all(s.failures == 0 for s in result.summaries)
        srs, opt, full = result.summaries
        assert srs.re_mse == pytest.approx(1.0)
        assert srs.re_a == pytest.approx(1.0)
        assert srs.se_re == pytest.approx(0.0, abs=1e-12)
        assert opt.re_a >= 1 - 1e-9
        assert full.criterion is None
        assert full.re_a is None
        assert full.re_mse > 1
        assert srs.mse == pytest.approx(srs.mse_sum / 4)

    def test_squared_errors(self, result):
        errors = result.squared_errors["OPT"]
        assert errors.shape == (20,)
        assert np.all(errors >= 0)
        assert result.summary("OPT").mse_sum == pytest.approx(errors.mean())
        with pytest.raises(KeyError):
            result.summary("BAYES")

    def test_independent_of_threads(self, scenario, result):
        threaded = run_study(scenario, threads=4)
        for name, errors in result.squared_errors.items():
            np.testing.assert_array_equal(threaded.squared_errors[name], errors)

    def test_pilot_designs(self, population):
        scenario = Scenario(
            population,
            n=100,
            m=2,
            designs=("SRS", "OPT", "DET2"),
            replications=5,
            setup="shifted-pilot",
            n_pilot=50,
        )
        result = run_study(scenario, threads=1)
        assert all(s.failures == 0 for s in result.summaries)
        assert result.summary("DET2").criterion is None

    def test_equal_budget(self, population):
        scenario = Scenario(
            population,
            n=100,
            m=2,
            designs=("SRS", "DET1", "FULL"),
            replications=5,
            setup="equal-budget",
            n_full=20,
        )
        result = run_study(scenario, threads=1)
        assert result.summary("FULL").n == 50
        assert result.summary("DET1").n == 80
        assert np.all(np.isfinite(result.squared_errors["DET1"]))

    def test_bayes_and_minimax(self, population):
        scenario = Scenario(
            population,
            n=100,
            m=2,
            designs=("SRS", "BAYES", "MINIMAX"),
            replications=3,
            bayes_draws=10,
            minimax_values=(0.2, 0.5, 0.8),
        )
        result = run_study(scenario, threads=1)
        for name in ("BAYES", "MINIMAX"):
            assert result.summary(name).criterion > 0
            assert result.summary(name).failures == 0

    def test_zero_inflated(self):
        population = StructuredPopSpec(
            g=2, q=2, rho1=0.8, rho2=0.2, model="zmvln", lambdas=(0.7, 0.9), N=2000
        )
        scenario = Scenario(population, n=300, m=2, replications=3)
        result = run_study(scenario, threads=1)
        assert result.summary("OPT").re_a >= 1 - 1e-9
        assert all(s.failures == 0 for s in result.summaries)

    def test_aborts_on_failures(self, scenario, mocker):
        mocker.patch("splitq.simulation.study._estimate", side_effect=EstimationError("boom"))
        with pytest.raises(StudyAbortedError, match="20 of 20"):
            run_study(scenario, threads=1)


class TestStudyOutput:
    def test_csv(self, result):
        buffer = io.StringIO()
        write_study_csv(result, buffer)
        buffer.seek(0)
        frame = pd.read_csv(buffer)
        assert list(frame.columns) == CSV_COLUMNS
        assert frame["design"].tolist() == ["SRS", "OPT", "FULL"]
        assert (frame["scenario"] == "tiny").all()
        assert (frame["replications"] == 20).all()
        assert np.isnan(frame.loc[2, "criterion"])

    def test_json(self, result):
        buffer = io.StringIO()
        write_study_json(result, buffer)
        report = json.loads(buffer.getvalue())
        assert report["scenario"]["population"]["N"] == 2000
        assert report["designs"][2]["criterion"] is None
        assert report["designs"][0]["name"] == "SRS"

    def test_non_finite_values_become_null(self, result):
        result.summaries[0].mse = float("nan")
        assert study_to_dict(result)["designs"][0]["mse"] is None
