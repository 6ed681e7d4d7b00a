import numpy as np
import pytest
from scipy import optimize, stats

from splitq.estimation import ObservedDataset, em_mvn, observed_loglik
from splitq.estimation.conditional import conditional_moments, mask_batches
from splitq.exceptions import EstimationError


MU = np.array([1.0, -1.0, 0.5])
SIGMA = np.array([[1.0, 0.6, 0.3], [0.6, 2.0, 0.5], [0.3, 0.5, 1.5]])


@pytest.fixture
def split_data():
    """60 respondents answering a random pair of the three items."""
    rng = np.random.default_rng(2016)
    values = rng.multivariate_normal(MU, SIGMA, size=60)
    observed = np.ones(values.shape, dtype=bool)
    observed[np.arange(60), rng.integers(0, 3, size=60)] = False
    return ObservedDataset(values, observed)


def _unpack(theta):
    lower = np.zeros((3, 3))
    lower[np.tril_indices(3)] = theta[3:]
    lower[np.diag_indices(3)] = np.exp(np.diag(lower))
    return theta[:3], lower @ lower.T


def _pack(mu, sigma):
    lower = np.linalg.cholesky(sigma)
    lower[np.diag_indices(3)] = np.log(np.diag(lower))
    return np.concatenate([mu, lower[np.tril_indices(3)]])


class TestEmMvn:
    def test_complete_data_in_closed_form(self):
        rng = np.random.default_rng(1)
        values = rng.multivariate_normal(MU, SIGMA, size=40)
        result = em_mvn(ObservedDataset.complete(values))
        assert result.iterations == 1
        assert result.converged
        np.testing.assert_allclose(result.mu_hat, values.mean(axis=0))
        np.testing.assert_allclose(result.sigma_hat, np.cov(values.T, bias=True))

    def test_matches_direct_maximisation(self, split_data):
        result = em_mvn(split_data, tol=1e-12)
        start = np.concatenate([np.zeros(3), np.zeros(6)])

        def negative(theta):
            mu, sigma = _unpack(theta)
            return -observed_loglik(split_data, mu, sigma)

        direct = optimize.minimize(negative, start, method="BFGS", options={"gtol": 1e-8})
        assert result.converged
        assert result.loglik[-1] >= -direct.fun - 1e-4
        mu, sigma = _unpack(direct.x)
        np.testing.assert_allclose(result.mu_hat, mu, atol=1e-2)
        np.testing.assert_allclose(result.sigma_hat, sigma, atol=2e-2)

    def test_direct_maximiser_cannot_improve_on_em(self, split_data):
        result = em_mvn(split_data, tol=1e-12)

        def negative(theta):
            mu, sigma = _unpack(theta)
            return -observed_loglik(split_data, mu, sigma)

        start = _pack(result.mu_hat, result.sigma_hat)
        polished = optimize.minimize(negative, start, method="BFGS", options={"gtol": 1e-9})
        assert abs(negative(start) + result.loglik[-1]) <= 1e-9 * abs(result.loglik[-1])
        assert -polished.fun - result.loglik[-1] <= 1e-6

    def test_loglik_never_decreases(self, split_data):
        trace = np.array(em_mvn(split_data).loglik)
        assert len(trace) > 2
        assert np.all(np.diff(trace) >= -1e-9 * np.abs(trace[:-1]))

    def test_empty_rows_are_dropped(self, split_data):
        values = np.vstack([split_data.filled(), np.zeros((1, 3))])
        observed = np.vstack([split_data.observed, np.zeros((1, 3), dtype=bool)])
        result = em_mvn(ObservedDataset(values, observed))
        assert any("dropping 1 rows" in w for w in result.warnings)
        np.testing.assert_allclose(result.mu_hat, em_mvn(split_data).mu_hat)

    def test_never_observed_item(self):
        data = ObservedDataset(np.ones((3, 2)), [[True, False]] * 3)
        with pytest.raises(EstimationError, match="item 1 is never observed"):
            em_mvn(data)

    def test_nothing_observed(self):
        with pytest.raises(EstimationError):
            em_mvn(ObservedDataset(np.ones((2, 2)), np.zeros((2, 2), dtype=bool)))

    def test_iteration_cap(self, split_data):
        result = em_mvn(split_data, tol=1e-300, max_iters=3)
        assert not result.converged
        assert any("did not converge" in w for w in result.warnings)


class TestConditionalMoments:
    def test_matches_explicit_formulas(self):
        rng = np.random.default_rng(4)
        values = rng.multivariate_normal(MU, SIGMA, size=40)
        observed = rng.uniform(size=values.shape) < 0.6
        observed[:5] = True
        observed[5:10] = [True, False, False]
        data = ObservedDataset(values, observed)
        observed = data.observed
        seen = 0
        for moments in conditional_moments(mask_batches(data), MU, SIGMA):
            batch = moments.batch
            for i, row in enumerate(batch.rows):
                obs, mis = batch.obs[i], batch.mis[i]
                expected = stats.multivariate_normal.logpdf(
                    batch.y_obs[i], mean=MU[obs], cov=SIGMA[np.ix_(obs, obs)]
                )
                assert moments.loglik[i] == pytest.approx(expected, rel=1e-10, abs=1e-12)
                coef = SIGMA[np.ix_(mis, obs)] @ np.linalg.inv(SIGMA[np.ix_(obs, obs)])
                np.testing.assert_allclose(
                    moments.mean[i], MU[mis] + coef @ (batch.y_obs[i] - MU[obs]), rtol=1e-10
                )
                np.testing.assert_allclose(
                    moments.cov[i],
                    SIGMA[np.ix_(mis, mis)] - coef @ SIGMA[np.ix_(obs, mis)],
                    rtol=1e-10,
                )
                seen += 1
        assert seen == observed.any(axis=1).sum()
        assert observed_loglik(data, MU, SIGMA) == pytest.approx(
            sum(
                stats.multivariate_normal.logpdf(
                    data.values[r, observed[r]],
                    mean=MU[observed[r]],
                    cov=SIGMA[np.ix_(observed[r], observed[r])],
                )
                for r in range(data.n)
                if observed[r].any()
            ),
            rel=1e-12,
        )

    def test_singular_observed_block(self):
        sigma = np.array([[1.0, 1.0], [1.0, 1.0]])
        data = ObservedDataset.complete([[0.5, 0.5]])
        with pytest.raises(np.linalg.LinAlgError):
            list(conditional_moments(mask_batches(data), np.zeros(2), sigma))
