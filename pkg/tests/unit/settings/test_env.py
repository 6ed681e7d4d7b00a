import pytest

from splitq.settings import Settings
from splitq.settings.env import settings_from_env


def test_overrides_from_env():
    env = {
        "one_var": "ignored",
        "SPLITQ__PATTERN_CAP": "50",
        "SPLITQ__REL_TOL": "1e-6",
        "SPLITQ__SETTINGS_FILE": "/not/read/here.yml",
    }
    settings = settings_from_env(Settings(), env)
    assert settings.pattern_cap == 50
    assert settings.rel_tol == 1e-6
    assert settings.seed == Settings().seed


def test_unknown_setting_is_ignored(caplog):
    settings = settings_from_env(Settings(), {"SPLITQ__COLOUR": "red"})
    assert settings == Settings()
    assert "Ignoring unknown setting COLOUR" in caplog.text


def test_bad_value():
    with pytest.raises(ValueError):
        settings_from_env(Settings(), {"SPLITQ__THREADS": "many"})
