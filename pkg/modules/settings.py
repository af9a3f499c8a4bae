# modules/settings.py
import os
from dataclasses import dataclass

from modules.errors import ConfigurationError


def parse_count(raw: str) -> int:
    """Non-negative integer written as "10000000" or "1e7"; ValueError otherwise"""
    raw = raw.strip()
    value = float(raw) if any(c in raw for c in "eE.") else int(raw)
    try:
        whole = int(value)
    except OverflowError:
        raise ValueError(f"{raw!r} is not finite")
    if value != whole or whole < 0:
        raise ValueError(f"{raw!r} is not a non-negative integer")
    return whole


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return parse_count(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be a non-negative integer, got {raw!r}")


@dataclass(frozen=True)
class Settings:
    """Runtime configuration read from the environment (.env is loaded by the entry script)"""
    node_budget: int = 10_000_000
    grid_bound: int = 1
    workers: int = 1
    seed: int = 0
    pigeonhole_threshold: int = 50
    dandy_max_ground: int = 8
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        level = os.getenv("HYPERSPACE_LOG_LEVEL", cls.log_level).upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigurationError(f"HYPERSPACE_LOG_LEVEL has unknown level {level!r}")
        workers = _env_int("HYPERSPACE_WORKERS", cls.workers)
        if workers < 1:
            raise ConfigurationError("HYPERSPACE_WORKERS must be at least 1")
        return cls(
            node_budget=_env_int("HYPERSPACE_NODE_BUDGET", cls.node_budget),
            grid_bound=_env_int("HYPERSPACE_GRID_BOUND", cls.grid_bound),
            workers=workers,
            seed=_env_int("HYPERSPACE_SEED", cls.seed),
            pigeonhole_threshold=_env_int("HYPERSPACE_PIGEONHOLE_THRESHOLD", cls.pigeonhole_threshold),
            dandy_max_ground=_env_int("HYPERSPACE_DANDY_MAX_GROUND", cls.dandy_max_ground),
            log_level=level,
        )


_settings = None


def get_settings() -> Settings:
    """Get the process-wide settings instance"""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def set_settings(settings: Settings):
    """Replace the process-wide settings (tests, CLI overrides)"""
    global _settings
    _settings = settings
