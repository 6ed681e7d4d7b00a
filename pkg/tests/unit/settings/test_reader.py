import io

import pytest

from splitq.settings import Settings, load_settings
from splitq.settings.reader import settings_from_reader


@pytest.fixture
def settings_yaml():
    return """
settings:
    pattern_cap: 500
    threads: 3
"""


def test_bad_yaml():
    with pytest.raises(Exception):
        settings_from_reader(Settings(), io.StringIO("sadfsaf"))


def test_no_settings_in_file():
    with pytest.raises(KeyError):
        settings_from_reader(Settings(), io.StringIO("example: []\n"))


def test_settings(settings_yaml):
    settings = settings_from_reader(Settings(), io.StringIO(settings_yaml))
    assert settings.pattern_cap == 500
    assert settings.threads == 3
    assert settings.max_iters == Settings().max_iters


class TestLoadSettings:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("SPLITQ__SETTINGS_FILE", raising=False)
        monkeypatch.delenv("SPLITQ__SEED", raising=False)
        assert load_settings().seed == 2016

    def test_env_wins_over_file(self, tmp_path, monkeypatch, settings_yaml):
        path = tmp_path / "splitq.yml"
        path.write_text(settings_yaml)
        monkeypatch.setenv("SPLITQ__SETTINGS_FILE", str(path))
        monkeypatch.setenv("SPLITQ__THREADS", "7")
        settings = load_settings()
        assert settings.pattern_cap == 500
        assert settings.threads == 7

    def test_missing_file(self, monkeypatch):
        monkeypatch.setenv("SPLITQ__SETTINGS_FILE", "/does/not/exist.yml")
        with pytest.raises(IOError):
            load_settings()

    def test_cached(self):
        assert load_settings() is load_settings()
