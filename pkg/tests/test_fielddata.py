from __future__ import annotations

import dataclasses
import json
import math

import numpy as np
import pytest

from arakzeta.fielddata import (
    field_from_dict,
    field_to_dict,
    load_field_file,
    make_quadratic,
    make_rationals,
    place_weights,
    require_quadratic_character,
    resolve_field_spec,
    save_field_file,
    trace_matrix,
    validate_field,
)
from arakzeta.models import CapabilityError, InputError, InvariantViolation


def test_rationals(rationals) -> None:
    assert (rationals.degree_n, rationals.r1, rationals.r2) == (1, 1, 0)
    assert rationals.unit_rank_r == 0
    assert rationals.hR == 1.0
    assert str(rationals) == "Q"


@pytest.mark.parametrize(
    ("m", "mu", "h", "regulator"),
    [
        (-1, 4, 1, 1.0),
        (-3, 6, 1, 1.0),
        (-15, 2, 2, 1.0),
        (2, 2, 1, math.log(1 + math.sqrt(2))),
        (5, 2, 1, math.log((1 + math.sqrt(5)) / 2)),
    ],
)
def test_quadratic_constructor_invariants(m: int, mu: int, h: int, regulator: float) -> None:
    field = make_quadratic(m)
    assert field.mu_count == mu
    assert field.class_number_h == h
    assert field.regulator == pytest.approx(regulator, rel=1e-12)
    assert field.different_norm == field.disc_abs


@pytest.mark.parametrize("m", [-1, -15, 5, 10])
def test_covolume_matches_norm_times_root_discriminant(m: int) -> None:
    field = make_quadratic(m)
    for basis in field.ideal_classes:
        det = abs(np.linalg.det(basis.matrix)) * 2.0**field.r2
        assert det == pytest.approx(basis.norm * math.sqrt(field.disc_abs), rel=1e-10)


def test_place_weights_and_trace_matrix(gaussian, sqrt5) -> None:
    assert place_weights(gaussian).tolist() == [2.0]
    assert place_weights(sqrt5).tolist() == [1.0, 1.0]
    # basis 1, (-1 + sqrt 5)/2
    assert np.allclose(trace_matrix(sqrt5), [[2.0, -1.0], [-1.0, 3.0]])


def test_validate_field_rejects_wrong_regulator(sqrt5) -> None:
    broken = dataclasses.replace(sqrt5, regulator=1.0)
    with pytest.raises(InvariantViolation) as excinfo:
        validate_field(broken)
    assert excinfo.value.check == "regulator"


def test_validate_field_rejects_wrong_covolume(rationals) -> None:
    broken = dataclasses.replace(rationals, disc_abs=4.0, different_norm=4.0)
    with pytest.raises(InvariantViolation) as excinfo:
        validate_field(broken)
    assert excinfo.value.check == "covolume"


def test_field_file_preserves_data(tmp_path) -> None:
    field = make_quadratic(-15)
    path = tmp_path / "q_sqrt_m15.json"
    save_field_file(field, path)
    stored = json.loads(path.read_text(encoding="utf-8"))
    assert stored["class_number"] == 2
    assert isinstance(stored["regulator"], str)
    assert load_field_file(path) == field


def test_field_from_dict_reports_schema_problems() -> None:
    data = field_to_dict(make_rationals())
    del data["regulator"]
    with pytest.raises(InputError) as excinfo:
        field_from_dict(data)
    assert not isinstance(excinfo.value, InvariantViolation)
    assert "regulator" in str(excinfo.value)


def test_resolve_field_spec(tmp_path) -> None:
    assert resolve_field_spec("builtin:Q").label == "Q"
    assert resolve_field_spec("builtin:quad:-3").mu_count == 6
    path = tmp_path / "field.json"
    save_field_file(make_quadratic(2), path)
    assert resolve_field_spec(f"file:{path}").label == "Q(sqrt(2))"
    with pytest.raises(InputError):
        resolve_field_spec("builtin:cubic:2")
    with pytest.raises(InputError):
        resolve_field_spec("builtin:quad:x")
    with pytest.raises(InputError):
        resolve_field_spec(f"file:{tmp_path / 'missing.json'}")


def test_quadratic_character(rationals, sqrt5) -> None:
    assert require_quadratic_character(rationals) == 1
    assert require_quadratic_character(sqrt5) == 5
    no_character = dataclasses.replace(sqrt5, fundamental_discriminant=None)
    with pytest.raises(CapabilityError):
        require_quadratic_character(no_character)
