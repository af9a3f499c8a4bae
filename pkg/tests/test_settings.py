import pytest

from modules.errors import ConfigurationError
from modules.metrics import SearchMetrics
from modules.settings import Settings, get_settings, set_settings


def test_defaults(monkeypatch):
    for name in ("HYPERSPACE_NODE_BUDGET", "HYPERSPACE_WORKERS", "HYPERSPACE_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    settings = Settings.from_env()
    assert settings.node_budget == 10_000_000
    assert settings.workers == 1
    assert settings.log_level == "WARNING"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("HYPERSPACE_NODE_BUDGET", "1e5")
    monkeypatch.setenv("HYPERSPACE_SEED", "7")
    monkeypatch.setenv("HYPERSPACE_LOG_LEVEL", "debug")
    settings = Settings.from_env()
    assert settings.node_budget == 100_000
    assert settings.seed == 7
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize("name,value", [
    ("HYPERSPACE_NODE_BUDGET", "lots"),
    ("HYPERSPACE_GRID_BOUND", "-1"),
    ("HYPERSPACE_WORKERS", "0"),
    ("HYPERSPACE_LOG_LEVEL", "LOUD"),
])
def test_bad_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigurationError, match=name):
        Settings.from_env()


def test_global_instance(monkeypatch):
    monkeypatch.setenv("HYPERSPACE_SEED", "11")
    set_settings(None)
    assert get_settings().seed == 11
    set_settings(Settings(seed=3))
    assert get_settings().seed == 3


def test_metrics():
    total = SearchMetrics(nodes=5, prunes=1, backtracks=4)
    total.stop()
    data = total.as_dict()
    assert data["nodes"] == 5
    assert data["backtracks"] == 4
    assert data["elapsed_seconds"] >= 0
