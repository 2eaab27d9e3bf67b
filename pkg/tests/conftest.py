import os
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from masterlist.domain.preferences import PreferenceSystem  # noqa: E402
from masterlist.services.generators import gen_four_cycles  # noqa: E402
from masterlist.settings import Settings, load_settings  # noqa: E402


@pytest.fixture(autouse=True, scope="session")
def _isolated_settings():
    # a developer config in the environment must not leak into tests
    saved = os.environ.pop("MASTERLIST_CONFIG", None)
    load_settings.cache_clear()
    yield
    load_settings.cache_clear()
    if saved is not None:
        os.environ["MASTERLIST_CONFIG"] = saved


@pytest.fixture
def default_settings() -> Settings:
    return Settings()


@pytest.fixture
def i1() -> PreferenceSystem:
    return gen_four_cycles(1)


@pytest.fixture
def single_edge() -> PreferenceSystem:
    return PreferenceSystem.from_named(["a", "b"], {"a": [["b"]], "b": [["a"]]})


@pytest.fixture
def ml_triangle() -> PreferenceSystem:
    # every order is the restriction of a > b > c
    return PreferenceSystem.from_named(
        ["a", "b", "c"],
        {"a": [["b"], ["c"]], "b": [["a"], ["c"]], "c": [["a"], ["b"]]},
    )


@pytest.fixture
def write_instance(tmp_path):
    def _write(text: str, name: str = "instance.txt") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write
