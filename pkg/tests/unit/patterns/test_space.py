import pytest

from splitq.exceptions import DesignSpaceTooLargeError
from splitq.patterns import Pattern, PatternSet, enumerate_patterns


class TestPattern:
    def test_of_sorts_and_dedups(self):
        assert Pattern.of([3, 1, 3]).items == (1, 3)

    @pytest.mark.parametrize("items", [(), (2, 1), (1, 1), (-1, 2)])
    def test_invalid(self, items):
        with pytest.raises(ValueError):
            Pattern(items)

    def test_str_is_one_based(self):
        assert str(Pattern((0, 2))) == "{1,3}"

    def test_contains(self):
        assert 2 in Pattern((0, 2))
        assert 1 not in Pattern((0, 2))


class TestEnumeratePatterns:
    @pytest.mark.parametrize("K, m, J", [(3, 1, 3), (4, 2, 6), (8, 2, 28), (5, 5, 1)])
    def test_counts(self, K, m, J):
        pattern_set = enumerate_patterns(K, m)
        assert pattern_set.J == J
        assert pattern_set.is_complete

    def test_lexicographic_order(self):
        pattern_set = enumerate_patterns(4, 2)
        assert [p.items for p in pattern_set] == [
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 3),
        ]

    def test_cap(self):
        with pytest.raises(DesignSpaceTooLargeError, match="C\\(10,5\\) = 252"):
            enumerate_patterns(10, 5, cap=100)

    def test_cap_from_settings(self, monkeypatch):
        monkeypatch.setenv("SPLITQ__PATTERN_CAP", "5")
        with pytest.raises(DesignSpaceTooLargeError):
            enumerate_patterns(4, 2)

    @pytest.mark.parametrize("K, m", [(3, 0), (3, 4), (0, 0)])
    def test_invalid_sizes(self, K, m):
        with pytest.raises(ValueError):
            enumerate_patterns(K, m)

    def test_incidence(self):
        pattern_set = enumerate_patterns(3, 2)
        assert pattern_set.incidence.tolist() == [[1, 1, 0], [1, 0, 1], [0, 1, 1]]


class TestPatternSet:
    def test_partial_set_is_not_complete(self):
        pattern_set = PatternSet(3, 2, [Pattern((0, 1)), Pattern((1, 2))])
        assert not pattern_set.is_complete
        assert pattern_set.position(Pattern((1, 2))) == 1

    def test_wrong_size(self):
        with pytest.raises(ValueError):
            PatternSet(3, 2, [Pattern((0,))])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            PatternSet(3, 2, [Pattern((1, 3))])

    def test_duplicates(self):
        with pytest.raises(ValueError):
            PatternSet(3, 2, [Pattern((0, 1)), Pattern((0, 1))])

    def test_equality(self):
        assert enumerate_patterns(4, 2) == enumerate_patterns(4, 2)
        assert enumerate_patterns(4, 2) != enumerate_patterns(4, 3)
