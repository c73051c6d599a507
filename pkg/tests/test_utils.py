from __future__ import annotations

import pytest

from arakzeta.utils import (
    dump_json_file,
    format_real,
    load_json_file,
    load_yaml_file,
    parse_complex,
    parse_complex_range,
    parse_real,
)


def test_format_real_uses_seventeen_significant_digits() -> None:
    assert format_real(0.1) == "0.10000000000000001"
    assert format_real(2) == "2"
    assert float(format_real(1 / 3)) == 1 / 3


def test_parse_real_accepts_decimal_strings_and_rejects_non_finite() -> None:
    assert parse_real("1.5e-3", field_name="x") == pytest.approx(1.5e-3)
    with pytest.raises(ValueError, match="'x' must be finite"):
        parse_real("inf", field_name="x")
    with pytest.raises(ValueError, match="real number"):
        parse_real(True, field_name="x")


def test_parse_complex_accepts_i_suffix() -> None:
    assert parse_complex("0.5+2i") == complex(0.5, 2.0)
    assert parse_complex(" 3 ") == 3 + 0j


def test_parse_complex_range_includes_both_endpoints() -> None:
    points = parse_complex_range("1:2+2j:3")
    assert points == [1 + 0j, 1.5 + 1j, 2 + 2j]
    assert parse_complex_range("2") == [2 + 0j]


@pytest.mark.parametrize("text", ["1:2", "1:2:0", "1:2:x"])
def test_parse_complex_range_rejects_malformed_ranges(text: str) -> None:
    with pytest.raises(ValueError):
        parse_complex_range(text)


def test_yaml_loader_expands_environment(tmp_path, monkeypatch) -> None:
    monkeypatch.setenv("ARAKZETA_TEST_GRID", "64")
    path = tmp_path / "settings.yaml"
    path.write_text("settings:\n  log_file: ${ARAKZETA_TEST_GRID}.log\n", encoding="utf-8")
    assert load_yaml_file(path) == {"settings": {"log_file": "64.log"}}


def test_json_helpers_write_and_read(tmp_path) -> None:
    path = tmp_path / "nested" / "data.json"
    dump_json_file(path, {"value": "1.25"})
    assert load_json_file(path) == {"value": "1.25"}
