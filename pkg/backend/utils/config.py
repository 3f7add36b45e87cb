"""
Configuration constants for the Hadamard duality tools.
Centralizes tolerances, caps, output formats and environment settings.
"""

import os
from dataclasses import dataclass
from pathlib import Path

from backend.utils.exceptions import ConfigurationError

# Tolerances
UNITARITY_TOL = 1e-10
HADAMARD_MODULUS_TOL = 1e-12
EIGENVALUE_MARGIN = 1e-9
DEFAULT_MUHAT_TOL = 1e-12
DEFAULT_SIGMA_TOL = 1e-10
FLOAT_ROUNDING_ALLOWANCE = 1e-14
MIN_MUHAT_TERM_TOL = 1e-12

# Caps and limits
DEFAULT_GAMMA_CAP = 10 ** 7
INTEGRALITY_STATE_CAP = 10 ** 7
EXPANSIVE_POWER_CAP = 64
TAIL_POWER_CAP = 256
INVERSE_POWER_CACHE_SIZE = 64
MUHAT_TRUNCATION_CAP = 4096
DEFAULT_NODE_CAP = 5 * 10 ** 6
DEFAULT_WORD_CAP = 2 * 10 ** 6
DEFAULT_SIMPLE_CYCLE_CAP = 10 ** 5
DEFAULT_MAX_WORD_LENGTH = 8

# Output formatting
FLOAT_SIGNIFICANT_DIGITS = 12
CSV_LINE_TERMINATOR = "\n"
CYCLE_TABLE_COLUMNS = ["p", "cycle_index", "length", "points", "digits"]
SYSTEM_CYCLE_COLUMNS = ["cycle_index", "length", "points", "digits"]
DENSITY_COLUMNS = ["n", "h", "count", "ratio"]
POINT_SEPARATOR = ";"

# Data files
PROJECT_ROOT = Path(__file__).resolve().parents[2]
SYSTEMS_DIR = PROJECT_ROOT / "data" / "systems"
GOLDEN_TABLE_FIXTURE = PROJECT_ROOT / "data" / "fixtures" / "cantor_cycles_p100.csv"
REPRODUCE_SEED = 20240501

# System file keys
SYSTEM_MATRIX_KEY = "R"
SYSTEM_B_KEY = "B"
SYSTEM_L_KEY = "L"
SYSTEM_NAME_KEY = "name"
SYSTEM_FILE_KEYS = (SYSTEM_MATRIX_KEY, SYSTEM_B_KEY, SYSTEM_L_KEY, SYSTEM_NAME_KEY)

# L-family conventions for admissibility scans
CONVENTION_P = "p"
CONVENTION_NP_HALF = "np/2"
L_CONVENTIONS = (CONVENTION_P, CONVENTION_NP_HALF)

# Environment variables
ENV_WORKERS = "HADAMARD_WORKERS"
ENV_GAMMA_CAP = "HADAMARD_GAMMA_CAP"
ENV_NODE_CAP = "HADAMARD_NODE_CAP"
ENV_LOG_LEVEL = "HADAMARD_LOG_LEVEL"


@dataclass(frozen=True)
class Settings:
    """Runtime settings read from the environment."""
    workers: int = 1
    gamma_cap: int = DEFAULT_GAMMA_CAP
    node_cap: int = DEFAULT_NODE_CAP
    log_level: str = "INFO"


def _positive_int_from_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from e
    if value <= 0:
        raise ConfigurationError(f"{name} must be positive, got {value}")
    return value


def get_settings() -> Settings:
    """
    Read runtime settings from environment variables.

    Returns:
        Settings populated from HADAMARD_* variables, defaults elsewhere

    Raises:
        ConfigurationError: If a variable is present but not a positive integer
    """
    log_level = os.environ.get(ENV_LOG_LEVEL, "INFO").upper()
    if log_level not in ("DEBUG", "INFO", "WARNING", "ERROR"):
        raise ConfigurationError(f"{ENV_LOG_LEVEL} must be DEBUG, INFO, WARNING or ERROR, got {log_level!r}")
    return Settings(
        workers=_positive_int_from_env(ENV_WORKERS, 1),
        gamma_cap=_positive_int_from_env(ENV_GAMMA_CAP, DEFAULT_GAMMA_CAP),
        node_cap=_positive_int_from_env(ENV_NODE_CAP, DEFAULT_NODE_CAP),
        log_level=log_level,
    )
