from __future__ import annotations

import math

import numpy as np
import pytest

from arakzeta.classspace import build_grid
from arakzeta.fielddata import make_quadratic
from arakzeta.models import CapabilityError, DomainError, InputError
from arakzeta.oscint import (
    A_factor,
    A_factor_mellin,
    C_integral,
    C_integral_local,
    C_tilde,
    HyperplaneIntegralSpec,
    alpha_k,
    asymptotic_ratio,
    gamma_closed_form,
    field_hyperplane_closed,
    hyperplane_integral_closed,
    hyperplane_integral_local,
    hyperplane_integral_numeric,
    hyperplane_spec_for_field,
    extreme_coordinates_bounded,
    local_window,
    random_hyperplane_points,
)


@pytest.mark.parametrize(("nu", "expected"), [((1, 1), 0.5), ((2, 2), 0.25)])
def test_cosh_integrals(nu, expected: float) -> None:
    spec = HyperplaneIntegralSpec(c=(1.0, 1.0), nu=nu)
    assert hyperplane_integral_closed(spec, 2) == pytest.approx(expected, rel=1e-14)
    assert hyperplane_integral_numeric(spec, 2) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize(
    "spec",
    [
        HyperplaneIntegralSpec(c=(1.0, 2.0), nu=(2, 1)),
        HyperplaneIntegralSpec(c=(0.5, 3.0), nu=(1, 3)),
        HyperplaneIntegralSpec(c=(1.0, 1.0, 2.0), nu=(2, 2, 1)),
    ],
)
@pytest.mark.parametrize("s", [1.5, 3.0, 2.0 + 1.0j])
def test_closed_form_agrees_with_quadrature(spec: HyperplaneIntegralSpec, s: complex) -> None:
    closed = hyperplane_integral_closed(spec, s)
    numeric = hyperplane_integral_numeric(spec, s)
    assert abs(numeric - closed) <= 1e-8 * abs(closed)


def test_quadrature_does_not_depend_on_dropped_coordinate() -> None:
    spec = HyperplaneIntegralSpec(c=(1.0, 1.0, 2.0), nu=(2, 2, 1))
    first = hyperplane_integral_numeric(spec, 2.0, drop=0)
    last = hyperplane_integral_numeric(spec, 2.0, drop=2)
    assert first == pytest.approx(last, rel=1e-8)


def test_spec_and_domain_checks() -> None:
    with pytest.raises(InputError):
        HyperplaneIntegralSpec(c=(1.0,), nu=(1,))
    with pytest.raises(InputError):
        HyperplaneIntegralSpec(c=(1.0, -1.0), nu=(1, 1))
    spec = HyperplaneIntegralSpec(c=(1.0, 1.0), nu=(1, 1))
    with pytest.raises(DomainError):
        hyperplane_integral_closed(spec, -0.5)
    with pytest.raises(DomainError):
        hyperplane_integral_numeric(spec, 0.5)
    with pytest.raises(CapabilityError):
        hyperplane_integral_numeric(HyperplaneIntegralSpec(c=(1.0,) * 5, nu=(1,) * 5), 2.0)


def test_field_specs(sqrt5, gaussian) -> None:
    assert hyperplane_spec_for_field(sqrt5) == HyperplaneIntegralSpec(c=(1.0, 1.0), nu=(2, 2))
    assert field_hyperplane_closed(sqrt5, 3.0) == pytest.approx(gamma_closed_form(sqrt5, 3.0), rel=1e-13)
    with pytest.raises(DomainError):
        gamma_closed_form(gaussian, 3.0)


@pytest.mark.parametrize("dimension", [2, 3, 4])
def test_max_and_min_coordinates_on_the_hyperplane(dimension: int) -> None:
    points = random_hyperplane_points(np.random.default_rng(3), 100_000, dimension)
    assert np.allclose(points.sum(axis=1), 0.0)
    assert extreme_coordinates_bounded(points).all()


def test_rank_zero_fields_have_exact_C(rationals, gaussian) -> None:
    assert C_integral(rationals, build_grid(rationals, 1), 5) == pytest.approx(2.0, abs=1e-12)
    assert C_integral(gaussian, build_grid(gaussian, 1), 3) == pytest.approx(4 * 2.0**-3, abs=1e-9)
    assert asymptotic_ratio(rationals, build_grid(rationals, 1), 7) == pytest.approx(1.0, abs=1e-12)
    assert alpha_k(rationals) == pytest.approx(1.0)


@pytest.mark.parametrize("m", [2, 5])
def test_asymptotic_ratio_trends_to_one(m: int, grid_cache) -> None:
    field = make_quadratic(m)
    grid = build_grid(field, 128)
    gaps = [abs(asymptotic_ratio(field, grid, s, cache=grid_cache) - 1.0) for s in (20.0, 40.0, 80.0)]
    assert gaps[2] < gaps[1] < gaps[0]
    assert gaps[2] <= 0.15


def test_local_integral_matches_full_line_for_wide_window(sqrt5) -> None:
    value = hyperplane_integral_local(sqrt5, 2.0, eps=12.0)
    assert value == pytest.approx(sqrt5.mu_count * 0.25, rel=1e-9)


def test_local_class_group_integral_is_part_of_the_whole(sqrt5) -> None:
    grid = build_grid(sqrt5, 64)
    local = C_integral_local(sqrt5, grid, 10.0, eps=0.2)
    total = C_integral(sqrt5, grid, 10.0)
    assert 0 < local.real <= total.real


def test_local_window_stays_inside_one_torus_cell(rationals, sqrt5) -> None:
    assert local_window(rationals) == pytest.approx(0.49)
    assert local_window(sqrt5) == pytest.approx(0.49 * sqrt5.regulator, rel=1e-12)
    assert local_window(sqrt5, 0.25) == pytest.approx(0.25 * sqrt5.regulator, rel=1e-12)
    with pytest.raises(InputError):
        local_window(sqrt5, 0.5)


@pytest.mark.parametrize("m", [2, 5])
def test_class_group_integral_near_the_origin_matches_the_hyperplane(m: int, grid_cache) -> None:
    field = make_quadratic(m)
    grid = build_grid(field, 64)
    eps = local_window(field)
    log_scale = math.log(field.degree_n)
    local = C_integral_local(field, grid, 80.0, eps, cache=grid_cache, log_scale=log_scale)
    closed = hyperplane_integral_local(field, 80.0, eps, log_scale=log_scale)
    whole = C_integral(field, grid, 80.0, cache=grid_cache) * field.degree_n**80
    assert local == pytest.approx(closed, rel=1e-4)
    assert local == pytest.approx(whole, rel=1e-4)


def test_rank_zero_local_integrals_are_exact(rationals, gaussian) -> None:
    for field in (rationals, gaussian):
        grid = build_grid(field, 1)
        local = C_integral_local(field, grid, 6.0, local_window(field))
        assert local == pytest.approx(hyperplane_integral_local(field, 6.0, local_window(field)), rel=1e-12)


def test_A_factor_matches_mellin_oracle(rationals, sqrt5) -> None:
    grid = build_grid(rationals, 1)
    assert A_factor(rationals, grid, 2.0) == pytest.approx(1.0 / math.pi, rel=1e-12)
    assert A_factor_mellin(rationals, grid, 2.0) == pytest.approx(1.0 / math.pi, rel=1e-8)
    grid5 = build_grid(sqrt5, 32)
    assert A_factor_mellin(sqrt5, grid5, 3.0) == pytest.approx(A_factor(sqrt5, grid5, 3.0), rel=1e-8)


def test_C_tilde_is_one_for_rationals(rationals) -> None:
    assert C_tilde(rationals, build_grid(rationals, 1), 4.0) == pytest.approx(1.0, abs=1e-14)


def test_C_tilde_near_one_for_large_s() -> None:
    field = make_quadratic(2)
    grid = build_grid(field, 128)
    s = 80.0
    value = (s / (2 * math.pi)) ** (field.unit_rank_r / 2.0) * C_tilde(field, grid, s)
    assert abs(value - 1.0) <= 0.1
