"""
Tests for settings loading
"""

import pytest

from bincompletion import config as settings_module
from bincompletion.config import DevelopmentConfig, ProductionConfig, SolverSettings, get_config
from bincompletion.exceptions import ConfigError
from bincompletion.models import PruningPolicy, SolverConfig


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("BINCOMP_ENVIRONMENT", "BINCOMP_TIME_LIMIT", "BINCOMP_LOG_LEVEL", "BINCOMP_DEFAULT_PRUNING"):
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    settings = SolverSettings()
    assert settings.time_limit == 300.0
    assert settings.node_limit is None
    assert settings.default_pruning == "ndp"
    assert settings.covering_h == 100
    assert settings.oracle_max_items == 16
    assert settings.generation_budget == 100_000
    assert settings.is_production()


@pytest.mark.parametrize(
    "name,cls",
    [
        ("development", DevelopmentConfig),
        ("dev", DevelopmentConfig),
        ("prod", ProductionConfig),
        ("TEST", settings_module.TestingConfig),
        ("staging", ProductionConfig),
    ],
)
def test_environment_aliases(name, cls):
    assert type(get_config(name)) is cls


def test_environment_from_variable(monkeypatch):
    monkeypatch.setenv("BINCOMP_ENVIRONMENT", "testing")
    assert isinstance(get_config(), settings_module.TestingConfig)


def test_env_override(monkeypatch):
    monkeypatch.setenv("BINCOMP_TIME_LIMIT", "12.5")
    monkeypatch.setenv("BINCOMP_DEFAULT_PRUNING", "NP")
    settings = get_config("production")
    assert settings.time_limit == 12.5
    assert settings.default_pruning == "np"


def test_invalid_value_raises_config_error(monkeypatch):
    monkeypatch.setenv("BINCOMP_LOG_LEVEL", "chatty")
    with pytest.raises(ConfigError) as exc:
        get_config("production")
    assert exc.value.config_value == "production"
    assert exc.value.cause is not None


def test_logging_config():
    config = settings_module.TestingConfig(log_level="warning", log_format="JSON")
    assert config.get_logging_config() == {
        "level": "WARNING",
        "format": "json",
        "debug": True,
        "development_mode": True,
    }


def test_solver_config_from_settings():
    settings = settings_module.TestingConfig(default_pruning="np", covering_h=7)
    config = SolverConfig.from_settings(settings, node_limit=50, time_limit=None)
    assert config.pruning is PruningPolicy.NP
    assert config.covering_h == 7
    assert config.node_limit == 50
    assert config.time_limit == 30.0
