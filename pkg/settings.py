"""
Process-level settings read from the environment (.env supported)
"""
import logging
import os

from dotenv import load_dotenv

load_dotenv()
logger = logging.getLogger(__name__)

DEFAULT_CACHE_MB = 512


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"⚠️ {name}={raw!r} is not an integer, using {default}")
        return default
    if value < 1:
        logger.warning(f"⚠️ {name}={value} must be >= 1, using {default}")
        return default
    return value


def default_threads() -> int:
    """--threads fallback: CORRIDOR_TILT_THREADS, else all cores"""
    return _int_env("CORRIDOR_TILT_THREADS", os.cpu_count() or 1)


def cache_budget_mb() -> int:
    return _int_env("CORRIDOR_TILT_CACHE_MB", DEFAULT_CACHE_MB)


def log_level() -> str:
    return os.getenv("CORRIDOR_TILT_LOG_LEVEL", "INFO").upper()
