from __future__ import annotations

from pathlib import Path

import pytest

from arakzeta.fielddata import field_to_dict, make_quadratic
from arakzeta.ffzeta import curve_to_dict, make_elliptic
from arakzeta.utils import load_yaml_file
from arakzeta.validation import validate_config_data, validate_curve_data, validate_field_data


def test_sample_configuration_passes_validation() -> None:
    project_root = Path(__file__).resolve().parents[1]
    sample_path = project_root / "config" / "arakzeta.sample.yaml"
    if not sample_path.exists():
        pytest.skip("Sample configuration not present in repository checkout")
    data = load_yaml_file(sample_path)
    report = validate_config_data(data)
    assert report.errors == []


def test_validation_flags_out_of_range_tolerances_and_unknown_keys() -> None:
    report = validate_config_data({"settings": {"theta_tol": 0.1, "grid": 0, "colour": "blue"}})
    paths = {issue.path for issue in report.errors}
    assert "settings.theta_tol" in paths
    assert "settings.grid" in paths
    assert not report.is_valid


def test_large_w_small_is_a_warning_not_an_error() -> None:
    report = validate_config_data({"settings": {"w_small": 0.5}})
    assert report.is_valid
    assert [issue.code for issue in report.warnings] == ["w-small"]


def test_builtin_field_serialisation_validates() -> None:
    report = validate_field_data(field_to_dict(make_quadratic(-15)))
    assert report.errors == []


def test_field_signature_mismatch_is_reported() -> None:
    data = field_to_dict(make_quadratic(5))
    data["r1"] = 1
    report = validate_field_data(data)
    assert "signature" in {issue.code for issue in report.errors}


def test_curve_schema_rejects_missing_classes() -> None:
    data = curve_to_dict(make_elliptic(3, 4))
    assert validate_curve_data(data).is_valid
    del data["classes"]
    assert not validate_curve_data(data).is_valid
