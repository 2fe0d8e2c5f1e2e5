"""
Configuration loading for the tropical engine.

Settings live in YAML next to the code; the worker count may be overridden
through the environment (or a .env file).
"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, TypeVar, Union

import yaml
from dotenv import load_dotenv

from tropical_engine.errors import ConfigError

logger = logging.getLogger(__name__)

WORKERS_ENV_VAR = "TROPICAL_ENGINE_WORKERS"
DEFAULT_CONFIG_PATH = Path(__file__).parent / "engine_config.yaml"

T = TypeVar("T")
R = TypeVar("R")


def load_yaml(config_path: Union[str, Path]) -> Dict[str, Any]:
    """Load a YAML configuration file.

    Args:
        config_path: Path to the YAML file

    Returns:
        Dict[str, Any]: Parsed configuration (empty dict for an empty file)
    """
    try:
        with open(config_path, "r", encoding="utf-8") as file:
            config = yaml.safe_load(file) or {}
            logger.debug(f"Configuration loaded from {config_path}")
            return config
    except FileNotFoundError:
        error_msg = f"Configuration file not found at {config_path}. YAML configuration is required."
        logger.error(error_msg)
        raise FileNotFoundError(error_msg)
    except yaml.YAMLError as e:
        error_msg = f"Error parsing YAML configuration: {e}"
        logger.error(error_msg)
        raise ConfigError(error_msg)


@lru_cache(maxsize=None)
def _cached_config(path: str) -> Dict[str, Any]:
    return load_yaml(path)


def load_config(config_path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """Load the engine configuration, defaulting to engine_config.yaml in this package."""
    if config_path is None:
        config_path = DEFAULT_CONFIG_PATH
    return _cached_config(str(config_path))


def setting(section: str, key: str, default: Any = None, config_path: Optional[Union[str, Path]] = None) -> Any:
    """Read config[section][key], falling back to `default`."""
    return (load_config(config_path).get(section) or {}).get(key, default)


def worker_count() -> int:
    """Number of worker threads for sweeps; the environment wins over YAML."""
    load_dotenv(override=True)
    raw = os.getenv(WORKERS_ENV_VAR)
    if raw is None:
        return max(1, int(setting("parallel", "workers", 1)))
    try:
        return max(1, int(raw))
    except ValueError:
        error_msg = f"{WORKERS_ENV_VAR} must be a positive integer, got {raw!r}"
        logger.error(error_msg)
        raise ConfigError(error_msg)


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Map `fn` over `items`, in a thread pool when more than one worker is configured.

    Results keep the order of `items`.
    """
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
