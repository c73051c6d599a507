from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
import sympy

from arakzeta import ffzeta
from arakzeta.ffzeta import (
    T,
    U,
    ClassCount,
    CurveData,
    check_functional_equation,
    curve_summary,
    evaluate_two_var,
    extract_P,
    functional_equation_residual,
    load_curve_file,
    make_elliptic,
    make_p1,
    p1_effective_divisor_oracle,
    random_curve_data,
    resolve_curve_spec,
    sample_points,
    save_curve_file,
    specialize_u,
    validate_curve,
    zeta_classical,
    zeta_GS_ff,
    zeta_sw_ff,
    zeta_two_var,
)
from arakzeta.models import DataError, InputError, InvariantViolation


def test_p1_zeta_is_exact() -> None:
    zeta = zeta_two_var(make_p1(3))
    assert sympy.simplify(zeta.as_expr() - 1 / ((1 - T) * (1 - U * T))) == 0
    assert [poly.as_expr() for poly in extract_P(zeta, 0)] == [1]


@pytest.mark.parametrize(("q", "points"), [(2, 5), (3, 4), (5, 2), (4, 9)])
def test_elliptic_P_polynomial(q: int, points: int) -> None:
    polys = extract_P(zeta_two_var(make_elliptic(q, points)), 1)
    assert [sympy.expand(poly.as_expr()) for poly in polys] == [1, points - 1 - U, U]


def test_elliptic_hasse_bound() -> None:
    with pytest.raises(InputError):
        make_elliptic(2, 7)


@pytest.mark.parametrize("seed", range(50))
def test_functional_equation_for_generated_curves(seed: int) -> None:
    rng = np.random.default_rng(seed)
    genus = int(rng.integers(1, 4))
    h = int(rng.integers(1, 8))
    q = int(rng.choice([2, 3, 4, 5, 7]))
    curve = random_curve_data(rng, genus, h, q)
    zeta = zeta_two_var(curve)
    assert check_functional_equation(zeta, genus) == (True, None)
    assert functional_equation_residual(zeta, genus) == 0
    polys = extract_P(zeta, genus)
    assert polys[0].as_expr() == 1
    assert sympy.expand(polys[-1].as_expr() - U**genus) == 0


def test_validate_curve_rejects_riemann_roch_violation() -> None:
    # genus 2: degree 0 with h0 = 1 forces h0 = 2 in degree 2
    broken = CurveData(
        q=2,
        genus=2,
        h=1,
        classes=(ClassCount(0, 1, 1), ClassCount(1, 0, 1), ClassCount(2, 1, 1)),
    )
    with pytest.raises(InvariantViolation) as excinfo:
        validate_curve(broken)
    assert excinfo.value.check == "riemann-roch"


@pytest.mark.parametrize(
    ("curve", "check"),
    [
        (CurveData(q=6, genus=0, h=1), "prime-power"),
        (CurveData(q=2, genus=0, h=2), "genus-zero"),
        (CurveData(q=2, genus=1, h=2, classes=(ClassCount(0, 1, 1),)), "class-count"),
        (CurveData(q=2, genus=1, h=1, classes=(ClassCount(0, 0, 1),)), "degree-zero"),
    ],
)
def test_validate_curve_named_checks(curve: CurveData, check: str) -> None:
    with pytest.raises(InvariantViolation) as excinfo:
        validate_curve(curve)
    assert excinfo.value.check == check


def test_classical_specialisation_matches_hasse_weil() -> None:
    curve = make_elliptic(3, 4)
    classical = specialize_u(zeta_two_var(curve), 3)
    expected = (1 + 0 * T + 3 * T**2) / ((1 - T) * (1 - 3 * T))
    assert sympy.simplify(classical.as_expr() - expected) == 0
    # N_1 = q + 1 - a = 4 rational points
    coefficients = classical.taylor(3)
    assert coefficients[:2] == [1, 4]


def test_p1_divisor_counts_three_ways() -> None:
    assert p1_effective_divisor_oracle(2, 3) == [1, 3, 7, 15]
    for q in (2, 3, 4):
        counts = p1_effective_divisor_oracle(q, 12)
        taylor = specialize_u(zeta_two_var(make_p1(q)), q).taylor(13)
        assert counts == [int(value) for value in taylor]
    with pytest.raises(InputError):
        p1_effective_divisor_oracle(6, 3)


def test_p1_divisors_are_enumerated_in_low_degree(monkeypatch) -> None:
    # x^2 + 1 = (x + 1)^2 over F_2: one closed point counted twice
    assert ffzeta._divisor_key(2, (1, 0, 1)) == frozenset({((1, 1), 2)})
    assert ffzeta._enumerated_divisor_count(3, 2) == 13
    assert ffzeta._enumerated_divisor_count(4, 3) == 85
    assert ffzeta._enumerated_divisor_count(2, 9) is None

    # merging two divisors must break the agreement
    original = ffzeta._divisor_key

    def merged(q: int, coefficients):
        key = original(q, coefficients)
        return original(q, (1, 0)) if key == original(q, (1, 1)) else key

    monkeypatch.setattr(ffzeta, "_divisor_key", merged)
    with pytest.raises(DataError):
        p1_effective_divisor_oracle(2, 3)


def test_numeric_identities_at_random_points() -> None:
    rng = np.random.default_rng(17)
    curve = make_elliptic(2, 5)
    log_q = math.log(curve.q)
    for s, w in zip(sample_points(rng, 20), sample_points(rng, 20)):
        q_w = cmath.exp(w * log_q)
        q_s = cmath.exp(-s * log_q)
        direct = (q_w - 1.0) * evaluate_two_var(curve, q_s, q_w)
        assert zeta_sw_ff(curve, s, w) == pytest.approx(direct, rel=1e-12, abs=1e-12)
        # zeta(s, w) = zeta(w - s, w) for genus one
        assert zeta_sw_ff(curve, w - s, w) == pytest.approx(zeta_sw_ff(curve, s, w), rel=1e-12, abs=1e-12)
        # Z(q^-s, q^(s+t)) form
        assert zeta_GS_ff(curve, w - s, s) == pytest.approx(zeta_sw_ff(curve, s, w), rel=1e-12, abs=1e-12)
    assert zeta_classical(curve, 2.0) == pytest.approx(evaluate_two_var(curve, 0.25, 2.0), rel=1e-14)


def test_evaluate_P_agrees_with_Z_times_denominator() -> None:
    curve = make_elliptic(3, 4)
    t_value, u_value = 0.2 + 0.1j, 1.7 - 0.3j
    p_value = evaluate_two_var(curve, t_value, u_value, which="P")
    z_value = evaluate_two_var(curve, t_value, u_value)
    assert p_value == pytest.approx(z_value * (1 - t_value) * (1 - u_value * t_value), rel=1e-13)
    with pytest.raises(InputError):
        evaluate_two_var(curve, t_value, u_value, which="X")


def test_curve_files_and_specs(tmp_path) -> None:
    rng = np.random.default_rng(2)
    curve = random_curve_data(rng, 3, 4, 5)
    path = tmp_path / "curve.json"
    save_curve_file(curve, path)
    assert load_curve_file(path) == curve
    assert resolve_curve_spec(f"file:{path}") == curve
    assert resolve_curve_spec("builtin:ell:2:5") == make_elliptic(2, 5)
    assert resolve_curve_spec("builtin:p1:4") == make_p1(4)
    with pytest.raises(InputError):
        resolve_curve_spec("builtin:ell:2")
    with pytest.raises(InputError):
        resolve_curve_spec("builtin:p1:x")


def test_inconsistent_class_data_is_a_data_error() -> None:
    # bypasses validate_curve: degree-0 count disagrees with h
    curve = CurveData(q=2, genus=1, h=3, classes=(ClassCount(0, 1, 1),))
    with pytest.raises(DataError):
        zeta_two_var(curve)


def test_summary_strings() -> None:
    summary = curve_summary(make_elliptic(2, 5))
    assert summary["curve"] == "E/F2#5"
    assert summary["P"][1].replace(" ", "") in {"4-u", "-u+4"}
