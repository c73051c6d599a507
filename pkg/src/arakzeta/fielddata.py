"""Number-field invariants consumed by every number-field computation.

Embeddings are stored row-wise: row ``i`` holds the image of the ``i``-th
basis element of an ideal, real places first, then ``(Re, Im)`` pairs for
the complex places.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import quadratic
from .models import CapabilityError, InputError, InvariantViolation
from .utils import dump_json_file, format_real, load_json_file, parse_real
from .validation import validate_field_data

LOGGER = logging.getLogger(__name__)

UNIT_SUM_TOL = 1e-12
REGULATOR_TOL = 1e-10
COVOLUME_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class IdealLatticeBasis:
    norm: float
    embedding: Tuple[Tuple[float, ...], ...]

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.embedding, dtype=float)


@dataclass(frozen=True, slots=True)
class KappaEntry:
    """``d^-1 * a_class^-1 = gamma * a_target`` with ``shift_v = -e_v log|gamma|_v``."""

    class_index: int
    target_class: int
    shift: Tuple[float, ...]


@dataclass(frozen=True, slots=True)
class NumberFieldData:
    degree_n: int
    r1: int
    r2: int
    disc_abs: float
    mu_count: int
    class_number_h: int
    regulator: float
    ideal_classes: Tuple[IdealLatticeBasis, ...]
    unit_logs: Tuple[Tuple[float, ...], ...]
    different_norm: float
    label: str = ""
    fundamental_discriminant: Optional[int] = None
    kappa_classes: Tuple[KappaEntry, ...] = ()

    @property
    def unit_rank_r(self) -> int:
        return self.r1 + self.r2 - 1

    @property
    def place_count(self) -> int:
        return self.r1 + self.r2

    @property
    def hR(self) -> float:
        return self.class_number_h * self.regulator

    def kappa_entry(self, class_index: int) -> Optional[KappaEntry]:
        for entry in self.kappa_classes:
            if entry.class_index == class_index:
                return entry
        return None

    def __str__(self) -> str:
        return self.label or f"field(n={self.degree_n}, d={self.disc_abs:g})"


def place_weights(field: NumberFieldData) -> np.ndarray:
    """``e_v``: 1 at real places, 2 at complex places."""
    return np.array([1.0] * field.r1 + [2.0] * field.r2)


def coordinate_signs(field: NumberFieldData) -> np.ndarray:
    """Diagonal of the trace form in embedding coordinates."""
    return np.array([1.0] * field.r1 + [2.0, -2.0] * field.r2)


def trace_matrix(field: NumberFieldData, class_index: int = 0) -> np.ndarray:
    """``Tr(b_i b_j)`` for the stored basis of one ideal class."""
    matrix = field.ideal_classes[class_index].matrix
    return matrix @ np.diag(coordinate_signs(field)) @ matrix.T


def _regulator_from_logs(field: NumberFieldData) -> float:
    if field.unit_rank_r == 0:
        return 1.0
    logs = np.array(field.unit_logs, dtype=float)
    return float(abs(np.linalg.det(logs[:, :-1])))


def validate_field(field: NumberFieldData) -> NumberFieldData:
    """Check every structural invariant and raise on the first violation."""
    n = field.degree_n
    if field.r1 + 2 * field.r2 != n:
        raise InvariantViolation("signature", float(abs(field.r1 + 2 * field.r2 - n)))
    if field.class_number_h != len(field.ideal_classes):
        raise InvariantViolation(
            "class-count",
            float(abs(field.class_number_h - len(field.ideal_classes))),
            f"{len(field.ideal_classes)} ideal classes stored for class number {field.class_number_h}",
        )
    if field.disc_abs <= 0 or field.regulator <= 0 or field.different_norm <= 0:
        raise InputError("disc_abs, regulator and different_norm must be positive")
    if field.mu_count < 2 or field.mu_count % 2:
        raise InputError("mu_count must be an even integer >= 2")

    different_residual = abs(field.different_norm - field.disc_abs)
    if different_residual > COVOLUME_TOL * max(1.0, field.disc_abs):
        raise InvariantViolation("different-norm", different_residual)

    rank = field.unit_rank_r
    if len(field.unit_logs) != rank or any(len(row) != field.place_count for row in field.unit_logs):
        raise InvariantViolation("unit-logs-shape", float(abs(len(field.unit_logs) - rank)))
    for index, row in enumerate(field.unit_logs):
        residual = abs(math.fsum(row))
        if residual > UNIT_SUM_TOL * max(1.0, max(abs(value) for value in row)):
            raise InvariantViolation(
                "unit-log-sum",
                residual,
                f"unit log vector {index} does not sum to zero (residual {residual:.3e})",
            )

    if rank == 0:
        if field.regulator != 1.0:
            raise InvariantViolation(
                "regulator",
                abs(field.regulator - 1.0),
                "fields of unit rank 0 must carry regulator 1",
            )
    else:
        residual = abs(_regulator_from_logs(field) - field.regulator)
        if residual > REGULATOR_TOL * max(1.0, field.regulator):
            raise InvariantViolation("regulator", residual)

    expected_scale = math.sqrt(field.disc_abs) / 2.0**field.r2
    weights = place_weights(field)
    for index, basis in enumerate(field.ideal_classes):
        matrix = basis.matrix
        if matrix.shape != (n, n):
            raise InvariantViolation("embedding-shape", float(abs(matrix.shape[0] - n)))
        det = abs(float(np.linalg.det(matrix)))
        if det == 0.0:
            raise InvariantViolation("embedding-singular", 0.0, f"ideal class {index} has a singular basis")
        expected = basis.norm * expected_scale
        residual = abs(det - expected)
        if residual > COVOLUME_TOL * max(1.0, expected):
            raise InvariantViolation(
                "covolume",
                residual,
                f"ideal class {index}: |det| = {det:.12g}, expected {expected:.12g}",
            )
        coordinate_weight = np.concatenate([np.ones(field.r1), np.repeat(weights[field.r1 :], 2)])
        gram = matrix @ np.diag(coordinate_weight) @ matrix.T
        try:
            np.linalg.cholesky(gram)
        except np.linalg.LinAlgError as exc:
            raise InvariantViolation("gram-definite", 0.0, f"ideal class {index}: {exc}") from exc

    for entry in field.kappa_classes:
        if entry.class_index >= field.class_number_h or entry.target_class >= field.class_number_h:
            raise InvariantViolation("kappa-index", float(max(entry.class_index, entry.target_class)))
        if len(entry.shift) != field.place_count:
            raise InvariantViolation("kappa-shift", float(abs(len(entry.shift) - field.place_count)))
    return field


# -- constructors -----------------------------------------------------------


def make_rationals() -> NumberFieldData:
    field = NumberFieldData(
        degree_n=1,
        r1=1,
        r2=0,
        disc_abs=1.0,
        mu_count=2,
        class_number_h=1,
        regulator=1.0,
        ideal_classes=(IdealLatticeBasis(norm=1.0, embedding=((1.0,),)),),
        unit_logs=(),
        different_norm=1.0,
        label="Q",
        fundamental_discriminant=1,
        kappa_classes=(KappaEntry(0, 0, (0.0,)),),
    )
    return validate_field(field)


def _quadratic_basis(form: quadratic.BinaryQuadraticForm, discriminant: int) -> IdealLatticeBasis:
    a, b = form.a, form.b
    if discriminant < 0:
        root = math.sqrt(-discriminant)
        rows = ((float(a), 0.0), (-b / 2.0, root / 2.0))
    else:
        root = math.sqrt(discriminant)
        rows = ((float(a), float(a)), ((-b + root) / 2.0, (-b - root) / 2.0))
    return IdealLatticeBasis(norm=float(a), embedding=rows)


def make_quadratic(m: int) -> NumberFieldData:
    """Field data for ``Q(sqrt(m))`` from reduced forms and continued fractions."""
    if isinstance(m, bool) or not isinstance(m, int):
        raise InputError(f"m must be an integer, got {m!r}")
    discriminant = quadratic.fundamental_discriminant(m)
    forms = quadratic.class_representatives(discriminant)
    classes = tuple(_quadratic_basis(form, discriminant) for form in forms)
    disc_abs = float(abs(discriminant))
    half_log = 0.5 * math.log(disc_abs)

    if m > 0:
        unit = quadratic.fundamental_unit(m)
        r1, r2 = 2, 0
        unit_logs: Tuple[Tuple[float, ...], ...] = ((unit.log_value, -unit.log_value),)
        regulator = unit.log_value
        shift: Tuple[float, ...] = (half_log, half_log)
    else:
        r1, r2 = 0, 1
        unit_logs = ()
        regulator = 1.0
        shift = (2.0 * half_log,)

    field = NumberFieldData(
        degree_n=2,
        r1=r1,
        r2=r2,
        disc_abs=disc_abs,
        mu_count=quadratic.roots_of_unity_count(m),
        class_number_h=len(classes),
        regulator=regulator,
        ideal_classes=classes,
        unit_logs=unit_logs,
        different_norm=disc_abs,
        label=f"Q(sqrt({m}))",
        fundamental_discriminant=discriminant,
        kappa_classes=(KappaEntry(0, 0, shift),),
    )
    LOGGER.debug(
        "Quadratic field | Label: %s | Discriminant: %s | h: %s | R: %.12g",
        field.label,
        discriminant,
        field.class_number_h,
        field.regulator,
    )
    return validate_field(field)


# -- serialisation ----------------------------------------------------------


def _real_rows(rows: Sequence[Sequence[Any]], *, field_name: str) -> Tuple[Tuple[float, ...], ...]:
    return tuple(
        tuple(parse_real(value, field_name=f"{field_name}[{i}][{j}]") for j, value in enumerate(row))
        for i, row in enumerate(rows)
    )


def field_from_dict(data: Dict[str, Any]) -> NumberFieldData:
    report = validate_field_data(data)
    if not report.is_valid:
        first = report.errors[0]
        raise InputError(f"{first.path}: {first.message} ({first.code})")

    classes = tuple(
        IdealLatticeBasis(
            norm=parse_real(entry["norm"], field_name=f"ideal_classes[{index}].norm"),
            embedding=_real_rows(entry["embedding"], field_name=f"ideal_classes[{index}].embedding"),
        )
        for index, entry in enumerate(data["ideal_classes"])
    )
    kappa = tuple(
        KappaEntry(
            class_index=int(entry["class_index"]),
            target_class=int(entry["target_class"]),
            shift=tuple(parse_real(value, field_name="kappa_classes.shift") for value in entry["shift"]),
        )
        for entry in data.get("kappa_classes") or []
    )
    field = NumberFieldData(
        degree_n=int(data["degree"]),
        r1=int(data["r1"]),
        r2=int(data["r2"]),
        disc_abs=parse_real(data["disc_abs"], field_name="disc_abs"),
        mu_count=int(data["mu_count"]),
        class_number_h=int(data["class_number"]),
        regulator=parse_real(data["regulator"], field_name="regulator"),
        ideal_classes=classes,
        unit_logs=_real_rows(data["unit_logs"], field_name="unit_logs"),
        different_norm=parse_real(data["different_norm"], field_name="different_norm"),
        label=str(data.get("label") or ""),
        fundamental_discriminant=data.get("fundamental_discriminant"),
        kappa_classes=kappa,
    )
    return validate_field(field)


def field_to_dict(field: NumberFieldData) -> Dict[str, Any]:
    def rows(values: Sequence[Sequence[float]]) -> List[List[str]]:
        return [[format_real(value) for value in row] for row in values]

    payload: Dict[str, Any] = {
        "label": field.label,
        "degree": field.degree_n,
        "r1": field.r1,
        "r2": field.r2,
        "disc_abs": format_real(field.disc_abs),
        "mu_count": field.mu_count,
        "class_number": field.class_number_h,
        "regulator": format_real(field.regulator),
        "unit_logs": rows(field.unit_logs),
        "ideal_classes": [
            {"norm": format_real(basis.norm), "embedding": rows(basis.embedding)}
            for basis in field.ideal_classes
        ],
        "different_norm": format_real(field.different_norm),
        "fundamental_discriminant": field.fundamental_discriminant,
    }
    if field.kappa_classes:
        payload["kappa_classes"] = [
            {
                "class_index": entry.class_index,
                "target_class": entry.target_class,
                "shift": [format_real(value) for value in entry.shift],
            }
            for entry in field.kappa_classes
        ]
    return payload


def load_field_file(path: Path) -> NumberFieldData:
    try:
        data = load_json_file(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse field file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"field file {path} must contain a JSON object")
    return field_from_dict(data)


def save_field_file(field: NumberFieldData, path: Path) -> None:
    dump_json_file(path, field_to_dict(field))


def resolve_field_spec(spec: str) -> NumberFieldData:
    """``builtin:Q``, ``builtin:quad:<m>`` or ``file:<path>``."""
    text = spec.strip()
    if text == "builtin:Q":
        return make_rationals()
    if text.startswith("builtin:quad:"):
        raw = text[len("builtin:quad:") :]
        try:
            m = int(raw)
        except ValueError as exc:
            raise InputError(f"invalid quadratic field parameter '{raw}'") from exc
        return make_quadratic(m)
    if text.startswith("file:"):
        return load_field_file(Path(text[len("file:") :]).expanduser())
    raise InputError(f"unknown field spec '{spec}' (expected builtin:Q, builtin:quad:m or file:path)")


def require_quadratic_character(field: NumberFieldData) -> int:
    """Fundamental discriminant of ``Q`` (1) or a quadratic field, for L-series oracles."""
    if field.degree_n == 1:
        return 1
    if field.degree_n == 2 and field.fundamental_discriminant is not None:
        return int(field.fundamental_discriminant)
    raise CapabilityError(f"{field} is neither Q nor a quadratic field with known discriminant")
