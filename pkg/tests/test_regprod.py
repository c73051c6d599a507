from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from arakzeta.ffzeta import make_elliptic, make_p1
from arakzeta.models import DomainError, InputError, NumericError, PoleError
from arakzeta.regprod import (
    DEFAULT_ALPHA,
    ArithmeticTail,
    RegularizedSequence,
    curve_zero_offsets,
    ff_regularization_check,
    finite_product_residual,
    gamma_C_reg_check,
    gamma_R_reg_check,
    hurwitz_zeta_and_du,
    lattice_log_product,
    lerch_closed,
    lerch_numeric,
    log_reg_product,
    reg_product,
    translation_residual,
)


def test_hurwitz_values() -> None:
    assert hurwitz_zeta_and_du(2, 1)[0] == pytest.approx(math.pi**2 / 6, rel=1e-14)
    value, derivative = hurwitz_zeta_and_du(0, 1)
    assert value == pytest.approx(-0.5, abs=1e-14)
    assert derivative == pytest.approx(-0.5 * math.log(2 * math.pi), rel=1e-14)


@pytest.mark.parametrize("z", [0.3, 2.5, 1.0 + 2.0j])
def test_hurwitz_at_zero_is_half_minus_z(z: complex) -> None:
    assert hurwitz_zeta_and_du(0, z)[0] == pytest.approx(0.5 - z, abs=1e-13)


def test_hurwitz_domain_and_pole() -> None:
    with pytest.raises(DomainError):
        hurwitz_zeta_and_du(0, -0.5)
    with pytest.raises(PoleError):
        hurwitz_zeta_and_du(1, 2)


def test_regularized_product_of_positive_integers_is_sqrt_two_pi() -> None:
    sequence = RegularizedSequence(tails=(ArithmeticTail(1.0, 1.0),))
    assert reg_product(sequence) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-10)


def test_lerch_formula_at_random_points() -> None:
    rng = np.random.default_rng(5)
    for _ in range(10):
        z = complex(rng.uniform(0.1, 4.0), rng.uniform(-3.0, 3.0))
        alpha = float(rng.uniform(0.2, 3.0))
        closed = lerch_closed(alpha, z)
        assert abs(lerch_numeric(alpha, z) - closed) <= 1e-9 * abs(closed)


def test_translation_identity() -> None:
    assert abs(translation_residual(0.7, 0.4 + 0.3j)) <= 1e-10


@pytest.mark.parametrize("s", [1.0, 0.3 + 2.0j, -0.5 + 0.5j, 3.7])
def test_gamma_factors_are_one_over_two_pi_regularized(s: complex) -> None:
    assert abs(gamma_R_reg_check(s)) <= 1e-9
    assert abs(gamma_C_reg_check(s)) <= 1e-9


def test_gamma_check_rejects_poles() -> None:
    with pytest.raises(PoleError):
        gamma_R_reg_check(-2)


def test_finite_products_are_ordinary_products() -> None:
    assert finite_product_residual([(2.0, 1), (3.0 + 1.0j, 2), (0.5, 3)], alpha=0.7) <= 1e-13


def test_sequence_validation() -> None:
    with pytest.raises(InputError):
        RegularizedSequence(terms=((0.0, 1),))
    with pytest.raises(InputError):
        ArithmeticTail(1.0, 0.0)
    with pytest.raises(InputError):
        log_reg_product(RegularizedSequence(), alpha=0.0)


@pytest.mark.parametrize("s", [0.3 + 0.7j, 1.2 - 0.4j, 2.0 + 1.1j, -0.6 + 0.2j, 0.5 + 3.0j])
def test_p1_zeta_is_a_regularized_product(s: complex) -> None:
    assert abs(ff_regularization_check(2, 1.0, s)) <= 1e-6


def test_p1_regularization_does_not_depend_on_alpha() -> None:
    s = 0.4 + 0.9j
    first = ff_regularization_check(3, 0.5, s, alpha=DEFAULT_ALPHA)
    second = ff_regularization_check(3, 0.5, s, alpha=2.3)
    assert abs(first - second) <= 1e-8


def test_elliptic_P_is_a_regularized_product() -> None:
    curve = make_elliptic(2, 5)
    assert abs(ff_regularization_check(2, 1.0, 0.3 + 0.45j, curve=curve, target="P")) <= 1e-6


def test_zero_offsets_reproduce_the_roots() -> None:
    curve = make_elliptic(2, 5)
    offsets = curve_zero_offsets(curve, 1.0)
    assert len(offsets) == 2
    # P(T, 2) = 1 + 2T + 2T^2 vanishes at T = 2^(-rho)
    for rho in offsets:
        t_value = cmath.exp(-rho * math.log(2))
        assert abs(1 + 2 * t_value + 2 * t_value**2) <= 1e-12
    assert curve_zero_offsets(make_p1(2), 1.0) == []


def test_regularization_check_argument_validation() -> None:
    with pytest.raises(InputError):
        ff_regularization_check(2, 1.0, 0.5j, target="Q")
    with pytest.raises(InputError):
        ff_regularization_check(3, 1.0, 0.5j, curve=make_p1(2))


def test_lattice_through_origin_is_a_pole() -> None:
    with pytest.raises(PoleError):
        lattice_log_product(0j, 2j * math.pi, 1.0)


def test_lattice_on_branch_cut_is_rejected() -> None:
    with pytest.raises(NumericError):
        lattice_log_product(-1.0 + 0j, 2j * math.pi, 1.0)
