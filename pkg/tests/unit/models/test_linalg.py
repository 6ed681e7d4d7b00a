import numpy as np
import pytest

from splitq.models import (
    batched_spd_inverse,
    duplication_matrix,
    reciprocal_condition,
    spd_inverse,
    unvech,
    vech,
    vech_positions,
)


@pytest.fixture
def symmetric():
    return np.array([[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]])


class TestVech:
    def test_column_major_lower_triangle(self):
        matrix = np.array([[1.0, 2.0], [2.0, 3.0]])
        assert vech(matrix).tolist() == [1.0, 2.0, 3.0]

    def test_unvech_inverts_vech(self, symmetric):
        np.testing.assert_array_equal(unvech(vech(symmetric)), symmetric)

    def test_positions_are_symmetric(self):
        positions = vech_positions(4)
        np.testing.assert_array_equal(positions, positions.T)
        assert sorted(set(positions.ravel().tolist())) == list(range(10))

    def test_not_triangular(self):
        with pytest.raises(ValueError):
            unvech(np.zeros(4))


class TestDuplicationMatrix:
    @pytest.mark.parametrize("K", [1, 2, 3, 5])
    def test_maps_vech_to_vec(self, K):
        rng = np.random.default_rng(K)
        a = rng.normal(size=(K, K))
        symmetric = a + a.T
        np.testing.assert_allclose(duplication_matrix(K) @ vech(symmetric), symmetric.ravel())

    def test_shape(self):
        assert duplication_matrix(3).shape == (9, 6)


class TestInverses:
    def test_spd_inverse(self, symmetric):
        np.testing.assert_allclose(spd_inverse(symmetric) @ symmetric, np.eye(3), atol=1e-12)

    def test_batched(self, symmetric):
        stack = np.stack([symmetric, 2 * symmetric])
        inverses = batched_spd_inverse(stack)
        np.testing.assert_allclose(inverses[1], np.linalg.inv(2 * symmetric))

    def test_batched_reports_failing_matrix(self, symmetric):
        stack = np.stack([symmetric, -symmetric])
        with pytest.raises(np.linalg.LinAlgError) as error:
            batched_spd_inverse(stack)
        assert error.value.index == 1

    def test_reciprocal_condition(self):
        assert reciprocal_condition(np.diag([1.0, 1e-14])) < 1e-12
        assert reciprocal_condition(np.eye(3)) == pytest.approx(1.0)
