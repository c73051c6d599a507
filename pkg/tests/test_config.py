from __future__ import annotations

import textwrap

import pytest

from arakzeta.config import RunConfig, RunSettings, load_config, load_settings_data


def write_yaml(path, content: str) -> None:
    path.write_text(textwrap.dedent(content), encoding="utf-8")


def test_defaults_match_documented_values() -> None:
    settings = RunSettings()
    assert settings.theta_tol == 1e-10
    assert settings.t_tol == 1e-10
    assert settings.grid == 256
    assert settings.w_small == 1e-6
    assert settings.threads is None


def test_load_config_reads_settings_and_expands_environment(tmp_path, monkeypatch) -> None:
    monkeypatch.setenv("ARAKZETA_LOG_DIR", str(tmp_path / "logs"))
    config_path = tmp_path / "arakzeta.yaml"
    write_yaml(
        config_path,
        """
        settings:
          theta_tol: 1.0e-8
          grid: 64
          threads: 3
          log_file: ${ARAKZETA_LOG_DIR}/run.log
        """,
    )

    settings = load_config(config_path)

    assert settings.theta_tol == 1e-8
    assert settings.t_tol == 1e-10
    assert settings.grid == 64
    assert settings.threads == 3
    assert settings.log_file == tmp_path / "logs" / "run.log"


def test_missing_settings_block_uses_defaults() -> None:
    assert load_settings_data({}) == RunSettings()


@pytest.mark.parametrize(
    ("settings", "message"),
    [
        ({"theta_tol": 0.5}, "'theta_tol' must lie in"),
        ({"grid": 0}, "'grid' must be a positive integer"),
        ({"w_small": -1}, "'w_small' must be greater than 0"),
        ({"band": -1e-3}, "'band' must be greater than or equal to 0"),
        ({"grid_points": 4}, "Unknown settings: grid_points"),
    ],
)
def test_invalid_settings_raise_value_error(settings, message: str) -> None:
    with pytest.raises(ValueError, match=message):
        load_settings_data({"settings": settings})


def test_run_config_requires_nonempty_ranges() -> None:
    with pytest.raises(ValueError, match="'s' range"):
        RunConfig(subcommand="nfzeta", w_values=[1 + 0j])
    with pytest.raises(ValueError, match="'w' range"):
        RunConfig(subcommand="nfzeta", s_values=[2 + 0j])
    run = RunConfig(subcommand="verify")
    assert run.curve_specs == []
