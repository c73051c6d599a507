from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from .utils import load_yaml_file


@dataclass(slots=True)
class RunSettings:
    theta_tol: float = 1e-10
    t_tol: float = 1e-10
    grid: int = 256
    w_small: float = 1e-6
    band: float = 1e-9
    hyperplane_tol: float = 1e-10
    threads: Optional[int] = None
    refine_cap: int = 2**14
    log_file: Optional[Path] = None


@dataclass(slots=True)
class RunConfig:
    """One CLI invocation: what to compute, where, and with which settings."""

    subcommand: str
    settings: RunSettings = field(default_factory=RunSettings)
    field_spec: Optional[str] = None
    curve_specs: List[str] = field(default_factory=list)
    s_values: List[complex] = field(default_factory=list)
    w_values: List[complex] = field(default_factory=list)
    function: str = "zeta_xk"
    output: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.subcommand in {"nfzeta", "oscint"} and not self.s_values:
            raise ValueError("'s' range must contain at least one point")
        if self.subcommand == "nfzeta" and not self.w_values:
            raise ValueError("'w' range must contain at least one point")


def _parse_tolerance(value: Any, *, field_name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"'{field_name}' must be a number") from exc
    if not 0 < number <= 1e-3:
        raise ValueError(f"'{field_name}' must lie in (0, 1e-3]")
    return number


def _parse_positive_int(value: Any, *, field_name: str) -> int:
    if isinstance(value, bool):
        raise ValueError(f"'{field_name}' must be a positive integer")
    try:
        number = int(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"'{field_name}' must be a positive integer") from exc
    if number < 1 or number != value and not isinstance(value, str):
        raise ValueError(f"'{field_name}' must be a positive integer")
    return number


def _build_settings(data: Dict[str, Any]) -> RunSettings:
    if not isinstance(data, dict):
        raise ValueError("'settings' must be provided as a mapping when specified")

    defaults = RunSettings()
    known = {item.name for item in dataclasses.fields(RunSettings)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"Unknown settings: {', '.join(unknown)}")

    try:
        w_small = float(data.get("w_small", defaults.w_small))
    except (TypeError, ValueError) as exc:
        raise ValueError("'w_small' must be a number") from exc
    if w_small <= 0:
        raise ValueError("'w_small' must be greater than 0")

    try:
        band = float(data.get("band", defaults.band))
    except (TypeError, ValueError) as exc:
        raise ValueError("'band' must be a number") from exc
    if band < 0:
        raise ValueError("'band' must be greater than or equal to 0")

    threads_raw = data.get("threads")
    threads = None if threads_raw is None else _parse_positive_int(threads_raw, field_name="threads")

    log_file_raw = data.get("log_file")
    log_file = Path(log_file_raw).expanduser() if log_file_raw else None

    return RunSettings(
        theta_tol=_parse_tolerance(data.get("theta_tol", defaults.theta_tol), field_name="theta_tol"),
        t_tol=_parse_tolerance(data.get("t_tol", defaults.t_tol), field_name="t_tol"),
        grid=_parse_positive_int(data.get("grid", defaults.grid), field_name="grid"),
        w_small=w_small,
        band=band,
        hyperplane_tol=_parse_tolerance(
            data.get("hyperplane_tol", defaults.hyperplane_tol), field_name="hyperplane_tol"
        ),
        threads=threads,
        refine_cap=_parse_positive_int(data.get("refine_cap", defaults.refine_cap), field_name="refine_cap"),
        log_file=log_file,
    )


def load_settings_data(data: Dict[str, Any]) -> RunSettings:
    return _build_settings(data.get("settings", {}) or {})


def load_config(path: Path) -> RunSettings:
    data = load_yaml_file(path)
    return load_settings_data(data)
