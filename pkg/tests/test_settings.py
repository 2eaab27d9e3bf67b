from __future__ import annotations

import json

import pytest
from pydantic import ValidationError

from masterlist.domain.errors import ConfigError, TooLargeError, UnknownVertexError
from masterlist.settings import CONFIG_ENV, Settings, load_settings


@pytest.fixture(autouse=True)
def _fresh_cache():
    load_settings.cache_clear()
    yield
    load_settings.cache_clear()


def test_defaults(default_settings):
    assert default_settings.threads == 1
    assert default_settings.log_level == "WARNING"
    assert default_settings.swap_oracle_depth == 3
    assert load_settings() == default_settings


def test_load_from_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"threads": 4, "brute_force_edge_cap": 10}), encoding="utf-8")
    loaded = load_settings(str(path))
    assert loaded.threads == 4 and loaded.brute_force_edge_cap == 10
    assert loaded.popularity_matching_cap == Settings().popularity_matching_cap


def test_load_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "env.json"
    path.write_text('{"log_level": "DEBUG"}', encoding="utf-8")
    monkeypatch.setenv(CONFIG_ENV, str(path))
    assert load_settings().log_level == "DEBUG"


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError) as exc:
        load_settings(str(tmp_path / "nope.json"))
    assert exc.value.title == "Config not readable"


def test_broken_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError) as exc:
        load_settings(str(path))
    assert exc.value.title == "Config is not JSON"


@pytest.mark.parametrize("payload", [{"threads": 0}, {"log_level": "LOUD"}, {"colour": "red"}])
def test_invalid_values(tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    with pytest.raises(ConfigError) as exc:
        load_settings(str(path))
    assert exc.value.title == "Invalid config"


def test_settings_are_frozen(default_settings):
    with pytest.raises(ValidationError):
        default_settings.threads = 8


def test_error_payloads():
    plain = ConfigError(title="Invalid config", detail="threads")
    assert plain.to_dict() == {"title": "Invalid config", "detail": "threads"}
    assert str(plain) == "Invalid config: threads"

    capped = TooLargeError(title="Instance too large", detail="x", size=50, cap=40)
    assert capped.to_dict() == {
        "title": "Instance too large",
        "detail": "x",
        "size": 50,
        "cap": 40,
    }
    assert UnknownVertexError(title="t", detail="d", vertex="q").to_dict()["vertex"] == "q"
