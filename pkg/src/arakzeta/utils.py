from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import yaml


def ensure_directory(path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)


def expand_env(value: Any) -> Any:
    if isinstance(value, str):
        return os.path.expandvars(value)
    if isinstance(value, list):
        return [expand_env(item) for item in value]
    if isinstance(value, dict):
        return {key: expand_env(val) for key, val in value.items()}
    return value


def load_yaml_file(path: Path) -> Dict[str, Any]:
    with path.open("r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle) or {}
    return expand_env(data)


def load_json_file(path: Path) -> Any:
    with path.open("r", encoding="utf-8") as handle:
        return json.load(handle)


def dump_json_file(path: Path, data: Any) -> None:
    ensure_directory(path.parent)
    with path.open("w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=2)
        handle.write("\n")


def format_real(value: float) -> str:
    """Decimal text with 17 significant digits, independent of locale."""
    return f"{float(value):.17g}"


def parse_real(value: Any, *, field_name: str) -> float:
    """Accept doubles or decimal strings; reject non-finite values."""
    if isinstance(value, bool):
        raise ValueError(f"'{field_name}' must be a real number")
    try:
        number = float(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"'{field_name}' must be a real number") from exc
    if not math.isfinite(number):
        raise ValueError(f"'{field_name}' must be finite")
    return number


def parse_complex(text: str) -> complex:
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    if not cleaned:
        raise ValueError("empty complex literal")
    return complex(cleaned)


def parse_complex_range(text: str) -> List[complex]:
    """Parse ``START`` or ``START:STOP:COUNT`` into a list of points.

    Points are evenly spaced on the segment between two complex endpoints,
    both endpoints included.
    """
    parts = text.split(":")
    if len(parts) == 1:
        return [parse_complex(parts[0])]
    if len(parts) != 3:
        raise ValueError(f"range '{text}' must be START or START:STOP:COUNT")
    start = parse_complex(parts[0])
    stop = parse_complex(parts[1])
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise ValueError(f"range '{text}' has a non-integer count") from exc
    if count < 1:
        raise ValueError(f"range '{text}' must contain at least one point")
    if count == 1:
        return [start]
    steps = np.linspace(0.0, 1.0, count)
    return [start + (stop - start) * float(step) for step in steps]
