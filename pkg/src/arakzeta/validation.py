from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

from jsonschema import Draft7Validator


@dataclass(slots=True)
class ValidationIssue:
    """Represents a single validation problem."""

    severity: str
    path: str
    message: str
    code: str


@dataclass(slots=True)
class ValidationReport:
    """Aggregates validation warnings and errors."""

    errors: List[ValidationIssue] = field(default_factory=list)
    warnings: List[ValidationIssue] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def summary(self) -> str:
        return "; ".join(f"{issue.path}: {issue.message}" for issue in self.errors)


_REAL = {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^\s*[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?\s*$"}]}
_POSITIVE_INT = {"type": "integer", "minimum": 1}
_TOLERANCE = {"type": "number", "exclusiveMinimum": 0, "maximum": 1e-3}

CONFIG_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "settings": {
            "type": "object",
            "properties": {
                "theta_tol": _TOLERANCE,
                "t_tol": _TOLERANCE,
                "hyperplane_tol": _TOLERANCE,
                "grid": _POSITIVE_INT,
                "w_small": {"type": "number", "exclusiveMinimum": 0},
                "band": {"type": "number", "minimum": 0},
                "threads": {"type": ["integer", "null"], "minimum": 1},
                "refine_cap": _POSITIVE_INT,
                "log_file": {"type": ["string", "null"]},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": True,
}

FIELD_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "label": {"type": "string"},
        "degree": _POSITIVE_INT,
        "r1": {"type": "integer", "minimum": 0},
        "r2": {"type": "integer", "minimum": 0},
        "disc_abs": _REAL,
        "mu_count": {"type": "integer", "minimum": 2},
        "class_number": _POSITIVE_INT,
        "regulator": _REAL,
        "different_norm": _REAL,
        "fundamental_discriminant": {"type": ["integer", "null"]},
        "unit_logs": {"type": "array", "items": {"type": "array", "items": _REAL}},
        "ideal_classes": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "norm": _REAL,
                    "embedding": {
                        "type": "array",
                        "items": {"type": "array", "items": _REAL},
                    },
                },
                "required": ["norm", "embedding"],
                "additionalProperties": False,
            },
        },
        "kappa_classes": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "class_index": {"type": "integer", "minimum": 0},
                    "target_class": {"type": "integer", "minimum": 0},
                    "shift": {"type": "array", "items": _REAL},
                },
                "required": ["class_index", "target_class", "shift"],
                "additionalProperties": False,
            },
        },
    },
    "required": [
        "degree",
        "r1",
        "r2",
        "disc_abs",
        "mu_count",
        "class_number",
        "regulator",
        "unit_logs",
        "ideal_classes",
        "different_norm",
    ],
    "additionalProperties": False,
}

CURVE_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "label": {"type": "string"},
        "q": {"type": "integer", "minimum": 2},
        "genus": {"type": "integer", "minimum": 0},
        "h": _POSITIVE_INT,
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "degree": {"type": "integer", "minimum": 0},
                    "h0": {"type": "integer", "minimum": 0},
                    "count": _POSITIVE_INT,
                },
                "required": ["degree", "h0", "count"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["q", "genus", "h", "classes"],
    "additionalProperties": False,
}


def _format_jsonschema_path(path: Sequence[Any]) -> str:
    if not path:
        return "<root>"
    tokens: List[str] = []
    for part in path:
        if isinstance(part, int):
            if tokens:
                tokens[-1] = f"{tokens[-1]}[{part}]"
            else:
                tokens.append(f"[{part}]")
        else:
            tokens.append(str(part))
    return ".".join(tokens) if tokens else "<root>"


def _schema_issues(schema: Dict[str, Any], data: Any, report: ValidationReport) -> None:
    validator = Draft7Validator(schema)
    for error in sorted(validator.iter_errors(data), key=lambda exc: list(exc.path)):
        report.errors.append(
            ValidationIssue(
                severity="error",
                path=_format_jsonschema_path(list(error.absolute_path)),
                message=error.message,
                code="schema",
            )
        )


def validate_config_data(data: Dict[str, Any]) -> ValidationReport:
    report = ValidationReport()
    _schema_issues(CONFIG_SCHEMA, data, report)
    settings = data.get("settings") if isinstance(data, dict) else None
    if isinstance(settings, dict):
        w_small = settings.get("w_small")
        if isinstance(w_small, (int, float)) and w_small > 1e-2:
            report.warnings.append(
                ValidationIssue(
                    severity="warning",
                    path="settings.w_small",
                    message="w_small above 1e-2 makes the second-order w -> 0 limit inaccurate",
                    code="w-small",
                )
            )
    return report


def validate_field_data(data: Dict[str, Any]) -> ValidationReport:
    report = ValidationReport()
    _schema_issues(FIELD_SCHEMA, data, report)
    if not report.is_valid:
        return report

    degree = data["degree"]
    r1 = data["r1"]
    r2 = data["r2"]
    if r1 + 2 * r2 != degree:
        report.errors.append(
            ValidationIssue("error", "degree", f"degree {degree} differs from r1 + 2*r2 = {r1 + 2 * r2}", "signature")
        )
    if len(data["ideal_classes"]) != data["class_number"]:
        report.errors.append(
            ValidationIssue(
                "error",
                "ideal_classes",
                f"{len(data['ideal_classes'])} class representatives for class number {data['class_number']}",
                "class-count",
            )
        )
    for index, entry in enumerate(data["ideal_classes"]):
        rows = entry["embedding"]
        if len(rows) != degree or any(len(row) != degree for row in rows):
            report.errors.append(
                ValidationIssue(
                    "error",
                    f"ideal_classes[{index}].embedding",
                    f"embedding must be a {degree}x{degree} matrix",
                    "embedding-shape",
                )
            )
    unit_rank = r1 + r2 - 1
    logs = data["unit_logs"]
    if len(logs) != unit_rank or any(len(row) != r1 + r2 for row in logs):
        report.errors.append(
            ValidationIssue(
                "error",
                "unit_logs",
                f"expected {unit_rank} unit log vectors of length {r1 + r2}",
                "unit-logs-shape",
            )
        )
    for index, entry in enumerate(data.get("kappa_classes") or []):
        if len(entry["shift"]) != r1 + r2:
            report.errors.append(
                ValidationIssue(
                    "error",
                    f"kappa_classes[{index}].shift",
                    f"shift must have {r1 + r2} entries",
                    "kappa-shift",
                )
            )
        for key in ("class_index", "target_class"):
            if entry[key] >= data["class_number"]:
                report.errors.append(
                    ValidationIssue(
                        "error",
                        f"kappa_classes[{index}].{key}",
                        f"class index {entry[key]} out of range",
                        "kappa-index",
                    )
                )
    return report


def validate_curve_data(data: Dict[str, Any]) -> ValidationReport:
    report = ValidationReport()
    _schema_issues(CURVE_SCHEMA, data, report)
    if not report.is_valid:
        return report
    top = 2 * data["genus"] - 2
    for index, entry in enumerate(data["classes"]):
        if entry["degree"] > top:
            report.errors.append(
                ValidationIssue(
                    "error",
                    f"classes[{index}].degree",
                    f"degree {entry['degree']} outside [0, {max(top, 0)}]",
                    "degree-range",
                )
            )
    return report
