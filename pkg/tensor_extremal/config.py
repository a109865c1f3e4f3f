"""Centralized configuration settings for tensor-extremal."""

import logging
import os
from pathlib import Path
from typing import Type, TypeVar, cast

from tensor_extremal.constants import ENV_PREFIX
from tensor_extremal.exceptions import ConfigurationError

log = logging.getLogger(__name__)

T = TypeVar("T")


def _load_env_files() -> None:
    """Load ``.env`` files from the standard locations without overriding the environment."""
    env_locations = [
        Path.cwd() / ".env",
        Path(__file__).parent.parent / ".env",
        Path.home() / ".tensor_extremal" / ".env",
    ]
    try:
        from dotenv import load_dotenv
    except ImportError:
        log.debug("python-dotenv not installed, cannot load .env files.")
        return

    for env_path in env_locations:
        if env_path.is_file():
            log.debug(f"Loading environment variables from: {env_path}")
            load_dotenv(dotenv_path=env_path, override=False)


def get_env_var(name: str, default: str, target_type: Type[T]) -> T:
    """Get environment variable, cast to type, handle errors.

    Args:
        name: Variable name without the ``TENSOR_EXTREMAL_`` prefix.
        default: Default value used when the variable is unset.
        target_type: ``int``, ``float``, ``bool`` or ``Path``.

    Returns:
        The converted value.

    Raises:
        ConfigurationError: If the value cannot be converted.
    """
    full_name = f"{ENV_PREFIX}{name}"
    value_str = os.getenv(full_name, default)
    try:
        if target_type is bool:
            return cast(T, value_str.lower() in ("true", "1", "yes"))
        elif target_type is Path:
            return cast(T, Path(value_str).expanduser())
        else:
            value = target_type(value_str)  # type: ignore
    except ValueError as e:
        log.exception(
            f"Invalid value for environment variable '{full_name}': {value_str}. "
            f"Could not cast to {target_type.__name__}."
        )
        raise ConfigurationError(
            f"Invalid value for environment variable {full_name}: '{value_str}'. "
            f"Expected {target_type.__name__}.",
            original_exception=e,
        ) from e
    if isinstance(value, int) and value < 0:
        raise ConfigurationError(f"{full_name} must be non-negative, got {value}.")
    return cast(T, value)


_load_env_files()

# --- Enumeration caps and budgets ---
# Raw tensor sweeps (enumerate_tensors, count_avoiders)
DEFAULT_CAP_CELLS: int = get_env_var("CAP_CELLS", "25", int)
# Number of divisions find_full_division may walk through
DEFAULT_DIVISION_CAP: int = get_env_var("DIVISION_CAP", "1000000", int)
# Containment search nodes before the answer is declared unknown
DEFAULT_NODE_BUDGET: int = get_env_var("NODE_BUDGET", "5000000", int)
# Branch-and-bound nodes before f_exact reports a truncated lower bound
DEFAULT_SEARCH_BUDGET: int = get_env_var("SEARCH_BUDGET", "50000000", int)

# --- Reproducibility and parallelism ---
DEFAULT_SEED: int = get_env_var("SEED", "20240101", int)
DEFAULT_THREADS: int = get_env_var("THREADS", "1", int)

# --- Caching Settings ---
USE_CACHE: bool = get_env_var("USE_CACHE", "true", bool)
_default_cache_str = str(Path.home() / ".tensor_extremal" / "cache")
DEFAULT_CACHE_DIR: Path = get_env_var("CACHE_DIR", _default_cache_str, Path)
