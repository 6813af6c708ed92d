import json
import os
import pathlib
import random

import pytest
from hypothesis import HealthCheck, settings

from supertropical.lab import FiniteSemiringTable
from supertropical.valuations import padic_valuation, trivial_valuation

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("acceptance", max_examples=10_000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = pathlib.Path(__file__).parent / "data"


def mkdir(tmp_path, *parts):
    path = tmp_path.joinpath(*parts)
    if not path.exists():
        path.mkdir(parents=True)
    return path


@pytest.fixture(autouse=True)
def jupyter_dirs(tmp_path, monkeypatch):
    """Keep user and system Jupyter config out of every test."""
    monkeypatch.setenv("JUPYTER_PLATFORM_DIRS", "1")
    monkeypatch.setenv("JUPYTER_NO_CONFIG", "1")
    monkeypatch.setenv("JUPYTER_CONFIG_DIR", str(mkdir(tmp_path, "config")))
    monkeypatch.setenv("JUPYTER_DATA_DIR", str(mkdir(tmp_path, "data")))
    monkeypatch.setenv("JUPYTER_RUNTIME_DIR", str(mkdir(tmp_path, "runtime")))
    monkeypatch.delenv("JUPYTER_CONFIG_PATH", raising=False)
    monkeypatch.delenv("SUPERTROPICAL_SEED", raising=False)


@pytest.fixture()
def data_dir():
    return DATA


@pytest.fixture()
def load_table():
    def _load(name):
        return FiniteSemiringTable.load(DATA / f"{name}.json")

    return _load


@pytest.fixture()
def write_json(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture()
def rng():
    return random.Random(20240917)


@pytest.fixture(params=[2, 3, 5], ids=lambda p: f"padic{p}")
def padic(request):
    return padic_valuation(request.param)


@pytest.fixture()
def trivial():
    return trivial_valuation()

