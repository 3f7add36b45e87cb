"""
System description files.

A system file is a JSON object {"R": [[...]], "B": [[...]], "L": [[...]]}
with an optional "name". Every number is an integer or a "num/den" string.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Union

from backend.core.algebra import parse_rational
from backend.core.system.hadamard import HadamardSystem, ValidationReport, validate
from backend.utils.config import (
    SYSTEM_B_KEY, SYSTEM_FILE_KEYS, SYSTEM_L_KEY, SYSTEM_MATRIX_KEY, SYSTEM_NAME_KEY
)
from backend.utils.exceptions import SystemFileError, ValidationError
from backend.utils.logging import get_logger

logger = get_logger("system.io")


def _parse_number(value: Any, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SystemFileError(f"{where}: expected an integer or a \"num/den\" string, got {value!r}")
    try:
        return parse_rational(value)
    except ValidationError as e:
        raise SystemFileError(f"{where}: {e}") from e


def _parse_rows(value: Any, key: str) -> List[List]:
    if not isinstance(value, list) or not value:
        raise SystemFileError(f"\"{key}\" must be a non-empty list of lists")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise SystemFileError(f"\"{key}\"[{i}] must be a list")
        rows.append([_parse_number(x, f"{key}[{i}][{j}]") for j, x in enumerate(row)])
    return rows


def parse_system_dict(data: Dict[str, Any]) -> Dict[str, Any]:
    """
    Check the keys and numbers of a system description.

    Returns:
        Dictionary with keys R (rows), B, L (digit lists) and name

    Raises:
        SystemFileError: On unknown or missing keys or malformed numbers
    """
    if not isinstance(data, dict):
        raise SystemFileError("A system description must be a JSON object")
    unknown = sorted(set(data) - set(SYSTEM_FILE_KEYS))
    if unknown:
        raise SystemFileError(f"Unknown keys in system description: {', '.join(unknown)}")
    missing = [k for k in (SYSTEM_MATRIX_KEY, SYSTEM_B_KEY, SYSTEM_L_KEY) if k not in data]
    if missing:
        raise SystemFileError(f"Missing keys in system description: {', '.join(missing)}")
    name = data.get(SYSTEM_NAME_KEY)
    if name is not None and not isinstance(name, str):
        raise SystemFileError("\"name\" must be a string")
    return {
        SYSTEM_MATRIX_KEY: _parse_rows(data[SYSTEM_MATRIX_KEY], SYSTEM_MATRIX_KEY),
        SYSTEM_B_KEY: _parse_rows(data[SYSTEM_B_KEY], SYSTEM_B_KEY),
        SYSTEM_L_KEY: _parse_rows(data[SYSTEM_L_KEY], SYSTEM_L_KEY),
        SYSTEM_NAME_KEY: name,
    }


def load_system(path: Union[str, Path]) -> ValidationReport:
    """
    Read a system file and validate it.

    Args:
        path: Path to the JSON file

    Returns:
        ValidationReport for the triple in the file

    Raises:
        SystemFileError: If the file is missing, not JSON or malformed
        MalformedSystemError: If the triple has inconsistent dimensions
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise SystemFileError(f"System file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise SystemFileError(f"System file {path} is not valid JSON: {e}") from e

    parsed = parse_system_dict(data)
    name = parsed[SYSTEM_NAME_KEY] or path.stem
    logger.debug(f"Loaded system file {path}")
    return validate(parsed[SYSTEM_MATRIX_KEY], parsed[SYSTEM_B_KEY], parsed[SYSTEM_L_KEY], name=name)


def system_to_dict(system: HadamardSystem) -> Dict[str, Any]:
    """Inverse of parse_system_dict: integers stay integers, other rationals become strings."""
    def encode(x):
        return int(x) if x.denominator == 1 else str(x)

    data = {
        SYSTEM_MATRIX_KEY: [[encode(a) for a in row] for row in system.R.rows],
        SYSTEM_B_KEY: [[encode(a) for a in b] for b in system.B],
        SYSTEM_L_KEY: [[encode(a) for a in l] for l in system.L],
    }
    if system.name:
        data[SYSTEM_NAME_KEY] = system.name
    return data


def dump_system(system: HadamardSystem, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(system_to_dict(system), f, indent=2)
        f.write("\n")
