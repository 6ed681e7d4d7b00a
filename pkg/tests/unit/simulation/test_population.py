import numpy as np

from splitq.simulation import StructuredPopSpec, draw_responses, gen_population


class TestPopulation:
    def test_mvn(self):
        spec = StructuredPopSpec(2, 2, 0.8, 0.2, N=20000)
        population = gen_population(spec, seed=1)
        assert population.shape == (20000, 4)
        np.testing.assert_allclose(population.mean(axis=0), [1, 1, 2, 2], atol=0.05)
        np.testing.assert_allclose(np.corrcoef(population.T)[0, 1], 0.8, atol=0.02)
        np.testing.assert_allclose(np.corrcoef(population.T)[0, 2], 0.2, atol=0.03)

    def test_zmvln_has_zeros(self):
        spec = StructuredPopSpec(2, 2, 0.8, 0.2, model="zmvln", lambdas=(0.3, 0.9), N=5000)
        population = gen_population(spec, seed=2)
        np.testing.assert_allclose((population > 0).mean(axis=0), [0.3, 0.3, 0.9, 0.9], atol=0.03)
        assert population.min() == 0.0

    def test_seeded(self, small_mvn):
        np.testing.assert_array_equal(
            draw_responses(small_mvn, 10, 3), draw_responses(small_mvn, 10, 3)
        )
