"""Read settings from a yaml file."""
import io
import logging
import os
from typing import IO, TypeVar

import yaml

from .env import coerce_overrides


logger = logging.getLogger(__name__)

SETTINGS = "settings"
SPLITQ_SETTINGS_FILE = "SPLITQ__SETTINGS_FILE"

S = TypeVar("S")


def settings_from_env_file(settings: S) -> S:
    """Override settings from a configurable yaml file.

    The path of this file is expected to be set in the environment as
    `SPLITQ__SETTINGS_FILE`
    """
    settings_file = os.getenv(SPLITQ_SETTINGS_FILE, "")
    if settings_file != "":
        settings = _load_from_file(settings, settings_file)
    return settings


def _load_from_file(settings: S, path: str) -> S:
    try:
        with open(path, "r") as f:
            return settings_from_reader(settings, f)
    except IOError as e:
        logger.error(f"Error while loading settings file {path}")
        raise e


def settings_from_reader(settings: S, yaml_reader: IO) -> S:
    """Read the settings from a yml.

    The file has the following format:
        settings:
            pattern_cap: 50000
            threads: 4

    """
    loaded_data = yaml.safe_load(io.StringIO(yaml_reader.read()))
    if not loaded_data or SETTINGS not in loaded_data:
        raise KeyError(f"no settings in yaml data. Make sure the file has a '{SETTINGS}' element")
    logger.info(f"Loading {len(loaded_data[SETTINGS])} settings from file")
    return coerce_overrides(settings, loaded_data[SETTINGS], "the settings file")
