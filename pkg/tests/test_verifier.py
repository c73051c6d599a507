from __future__ import annotations

import pytest

from arakzeta import ffzeta
from arakzeta.fielddata import make_quadratic
from arakzeta.models import CapabilityError, CheckResult, NumericError
from arakzeta.verifier import NamedCheck, Verifier, run_verification


def test_rationals_pass_every_check(rationals, small_settings) -> None:
    stats = run_verification(small_settings, field=rationals)

    assert stats.all_passed, stats.failures
    assert stats.total == len(Verifier(small_settings, field=rationals).checks())
    assert stats.warnings == []


def test_group_filter_runs_only_matching_checks(small_settings) -> None:
    curves = [ffzeta.make_p1(3), ffzeta.make_elliptic(3, 4), ffzeta.make_elliptic(5, 2)]
    stats = Verifier(small_settings, curves=curves).run(groups={"ffzeta"})

    assert stats.all_passed, stats.failures
    # one identity check per curve, the generated class data and the P^1 divisor counts
    assert stats.passed == len(curves) + 2


def test_field_checks_need_a_field(small_settings) -> None:
    verifier = Verifier(small_settings)
    groups = {check.group for check in verifier.checks()}

    assert "arakelov" not in groups
    assert "zeta-nf" not in groups
    with pytest.raises(CapabilityError):
        verifier.params


def test_outcomes_are_classified(monkeypatch, small_settings) -> None:
    def unsupported() -> CheckResult:
        raise CapabilityError("not for this field")

    def broken() -> CheckResult:
        raise NumericError("quadrature diverged")

    checks = [
        NamedCheck("ok", "demo", lambda: CheckResult("ok", True, "fine", 0.0)),
        NamedCheck("bad", "demo", lambda: CheckResult("bad", False, "residual too large", 1.0)),
        NamedCheck("skipped", "demo", unsupported),
        NamedCheck("raised", "demo", broken),
    ]
    monkeypatch.setattr(Verifier, "checks", lambda self: checks)

    stats = Verifier(small_settings).run()

    assert (stats.passed, stats.failed, stats.errored) == (1, 1, 1)
    assert stats.failures == ["bad: residual too large", "raised: quadrature diverged"]
    assert stats.warnings == ["skipped: skipped (not for this field)"]
    assert not stats.all_passed


def test_threaded_run_keeps_check_order(monkeypatch, small_settings) -> None:
    small_settings.threads = 4
    checks = [
        NamedCheck(f"check-{index}", "demo", lambda index=index: CheckResult(f"check-{index}", False, str(index)))
        for index in range(12)
    ]
    monkeypatch.setattr(Verifier, "checks", lambda self: checks)

    stats = Verifier(small_settings).run()

    assert stats.failures == [f"check-{index}: {index}" for index in range(12)]


def _run_check(settings, name: str, **kwargs) -> CheckResult:
    checks = {check.name: check for check in Verifier(settings, **kwargs).checks()}
    return checks[name].run()


@pytest.mark.parametrize("m", [2, 5])
def test_grid_minimum_is_localized_at_the_origin(small_settings, m: int) -> None:
    result = _run_check(small_settings, "lattice-grid-minimum", field=make_quadratic(m))
    assert result.passed, result.detail
    assert "points below n + margin away from the origin: 0" in result.detail


@pytest.mark.parametrize(
    ("m", "name"),
    [
        (5, "lattice-unit-translation"),
        (10, "lattice-unit-translation"),
        (-15, "lattice-non-principal-bound"),
        (10, "lattice-non-principal-bound"),
        (5, "theta-doubling"),
        (5, "classspace-measure"),
        (-15, "classspace-measure"),
        (5, "oscillatory-locality"),
        (2, "oscillatory-asymptotics"),
    ],
)
def test_lattice_and_class_group_checks_on_quadratic_fields(small_settings, m: int, name: str) -> None:
    result = _run_check(small_settings, name, field=make_quadratic(m))
    assert result.passed, result.detail


@pytest.mark.parametrize(
    "name",
    [
        "zeta-direct-lower-region",
        "zeta-w-zero-paths",
        "zeta-normalized-functional-equation",
        "l-h1-functional-equation",
    ],
)
def test_zeta_checks_on_the_golden_field(small_settings, name: str) -> None:
    result = _run_check(small_settings, name, field=make_quadratic(5))
    assert result.passed, result.detail


def test_vacuous_checks_pass_on_rationals(small_settings, rationals) -> None:
    for name in ("lattice-unit-translation", "lattice-non-principal-bound"):
        result = _run_check(small_settings, name, field=rationals)
        assert result.passed
        assert result.residual == 0.0


def test_field_independent_oracles(small_settings) -> None:
    for name in ("quadratic-oracle", "hyperplane-extremes", "regularized-finite-product", "generated-curves"):
        result = _run_check(small_settings, name)
        assert result.passed, result.detail


def test_f_w_trend_on_the_golden_field(small_settings, sqrt5) -> None:
    result = _run_check(small_settings, "zeta-f-w-trend", field=sqrt5)
    assert result.passed, result.detail
    for label in ("w=0:", "w=1:", "w=2:"):
        assert label in result.detail
