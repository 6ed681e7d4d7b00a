import click
import pytest

from splitq.decorators import click_errors
from splitq.exceptions import UncoveredItemError


class TestClickErrors:
    def test_library_errors(self):
        @click_errors
        def func():
            raise UncoveredItemError(2)

        with pytest.raises(click.ClickException) as error:
            func()
        assert error.value.message == "UncoveredItemError: criterion undefined: item 2 uncovered"

    def test_validation_errors(self):
        @click_errors
        def func():
            raise ValueError("bad")

        with pytest.raises(click.ClickException, match="ValueError: bad"):
            func()

    def test_other_errors_pass_through(self):
        @click_errors
        def func():
            raise KeyError("missing")

        with pytest.raises(KeyError):
            func()

    def test_returns(self):
        @click_errors
        def func(a, b=1):
            return a + b

        assert func(1, b=2) == 3
        assert func.__name__ == "func"
