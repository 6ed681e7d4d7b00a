"""Public module functions."""
import dataclasses
import functools
import logging
import os

from .env import settings_from_env
from .reader import settings_from_env_file


logger = logging.getLogger(__name__)


__all__ = ["Settings", "load_settings"]


@dataclasses.dataclass(frozen=True)
class Settings:
    """Library wide defaults, overridable from a yaml file and the environment."""

    pattern_cap: int = 100_000
    threads: int = os.cpu_count() or 1
    seed: int = 2016
    max_iters: int = 5000
    rel_tol: float = 1e-10
    floor: float = 1e-12


#  Singleton
@functools.lru_cache(maxsize=1, typed=True)
def load_settings() -> Settings:
    """Load the settings fetching configuration from the settings file and the environment."""
    settings = Settings()
    settings = settings_from_env_file(settings)
    settings = settings_from_env(settings)
    return settings
