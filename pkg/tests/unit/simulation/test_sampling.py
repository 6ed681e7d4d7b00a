import numpy as np
import pytest

from splitq.patterns import (
    DesignDistribution,
    Pattern,
    enumerate_patterns,
    point_mass,
    srs_design,
)
from splitq.simulation import apply_design, deterministic_design, sample_rows


@pytest.fixture
def population():
    return np.arange(400.0).reshape(100, 4)


class TestSampleRows:
    def test_without_replacement(self, population):
        rows = sample_rows(population, 100, np.random.default_rng(0))
        assert sorted(rows[:, 0].tolist()) == population[:, 0].tolist()

    @pytest.mark.parametrize("n", [0, 101])
    def test_invalid(self, population, n):
        with pytest.raises(ValueError):
            sample_rows(population, n, np.random.default_rng(0))


class TestApplyDesign:
    def test_every_row_answers_m_items(self, population):
        data = apply_design(population, 50, srs_design(enumerate_patterns(4, 2)), seed=1)
        assert data.n == 50
        np.testing.assert_array_equal(data.observed.sum(axis=1), 2)

    def test_point_mass(self, population):
        pattern_set = enumerate_patterns(4, 2)
        design = point_mass(pattern_set, Pattern.of([1, 3]))
        data = apply_design(population, 20, design, seed=2)
        np.testing.assert_array_equal(data.observed, [[False, True, False, True]] * 20)

    def test_seeded(self, population):
        design = srs_design(enumerate_patterns(4, 3))
        first = apply_design(population, 30, design, seed=np.random.SeedSequence(5))
        second = apply_design(population, 30, design, seed=np.random.SeedSequence(5))
        np.testing.assert_array_equal(first.observed, second.observed)
        np.testing.assert_array_equal(first.filled(), second.filled())

    def test_pattern_frequencies(self):
        population = np.zeros((5000, 4))
        pattern_set = enumerate_patterns(4, 2)
        probs = np.array([0.3, 0.25, 0.2, 0.1, 0.1, 0.05])
        n = 4000
        data = apply_design(population, n, DesignDistribution(pattern_set, probs), seed=9)
        incidence = pattern_set.incidence.astype(bool)
        counts = np.array([np.all(data.observed == row, axis=1).sum() for row in incidence])
        assert counts.sum() == n
        assert np.all(np.abs(counts / n - probs) <= 4 * np.sqrt(probs * (1 - probs) / n))

    def test_dimension_mismatch(self, population):
        with pytest.raises(ValueError):
            apply_design(population, 5, srs_design(enumerate_patterns(3, 2)), seed=1)


class TestDeterministicDesign:
    def test_first_and_last(self):
        mask = deterministic_design("det1", 4, 3)
        np.testing.assert_array_equal(mask, [[True, False, False, True]] * 3)

    def test_first_two_after_full_rows(self):
        mask = deterministic_design("DET2", 3, 4, n_full=1)
        assert mask[0].all()
        np.testing.assert_array_equal(mask[1:], [[True, True, False]] * 3)

    @pytest.mark.parametrize(
        "variant,K,n,n_full", [("DET1", 1, 3, 0), ("DET1", 4, 3, 4), ("DET3", 4, 3, 0)]
    )
    def test_invalid(self, variant, K, n, n_full):
        with pytest.raises(ValueError):
            deterministic_design(variant, K, n, n_full)
