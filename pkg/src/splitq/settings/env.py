"""Load settings overrides from the environment."""
import dataclasses
import logging
import os
from typing import Any, Dict, Optional, TypeVar, cast


logger = logging.getLogger(__name__)


Env = Dict[str, str]

SPLITQ_PREFIX = "SPLITQ__"

S = TypeVar("S")


def coerce_overrides(settings: S, raw: Dict[str, Any], source: str) -> S:
    """Return a copy of the settings with the raw values cast to the field types."""
    fields = {field.name: field for field in dataclasses.fields(settings)}
    updates = {}
    for key, value in raw.items():
        name = key.lower()
        if name not in fields:
            logger.warning(f"Ignoring unknown setting {key} from {source}")
            continue
        kind = type(getattr(settings, name))
        try:
            updates[name] = kind(value)
        except (TypeError, ValueError) as e:
            logger.error(f"Error parsing setting {key}={value!r} from {source}")
            raise e
    return dataclasses.replace(settings, **updates)


def settings_from_env(settings: S, env: Optional[Env] = None) -> S:
    """Override settings from the environment.

    Variables with the prefix SPLITQ__ followed by an upper case field name
    are used, i.e. SPLITQ__PATTERN_CAP=50000. SPLITQ__SETTINGS_FILE is read by
    the file loader and skipped here.
    """
    if env is None:
        env = cast(Env, os.environ)
    raw = {
        key[len(SPLITQ_PREFIX) :]: val
        for key, val in env.items()
        if key.startswith(SPLITQ_PREFIX) and key != SPLITQ_PREFIX + "SETTINGS_FILE"
    }
    return coerce_overrides(settings, raw, "the environment")
