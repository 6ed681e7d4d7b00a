"""Decorators for the command line entry points."""
import functools
import logging
from typing import Callable, TypeVar

import click

from splitq.exceptions import SplitqError


T = TypeVar("T")

logger = logging.getLogger(__name__)


def click_errors(func: Callable[..., T]) -> Callable[..., T]:  # noqa
    """Turn library and validation errors into a one line `<ErrorClass>: <message>` click error."""

    @functools.wraps(func)
    def _wrapper(*args, **kwargs) -> T:
        try:
            return func(*args, **kwargs)
        except (SplitqError, ValueError) as e:
            logger.debug("command failed", exc_info=True)
            raise click.ClickException(f"{type(e).__name__}: {e}") from e

    return _wrapper
