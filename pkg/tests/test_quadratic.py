from __future__ import annotations

import math

import pytest

from arakzeta.models import InputError
from arakzeta.quadratic import (
    analytic_class_data,
    class_number,
    class_representatives,
    fundamental_discriminant,
    fundamental_unit,
    is_squarefree,
    kronecker_symbol,
    roots_of_unity_count,
    unit_by_search,
)


@pytest.mark.parametrize(("m", "expected"), [(-1, -4), (-3, -3), (2, 8), (5, 5), (-15, -15), (10, 40)])
def test_fundamental_discriminant(m: int, expected: int) -> None:
    assert fundamental_discriminant(m) == expected


@pytest.mark.parametrize("m", [0, 1, 4, -8])
def test_fundamental_discriminant_rejects_non_squarefree(m: int) -> None:
    with pytest.raises(InputError):
        fundamental_discriminant(m)


@pytest.mark.parametrize(
    ("discriminant", "h"),
    [(-3, 1), (-4, 1), (-15, 2), (-20, 2), (-23, 3), (5, 1), (8, 1), (12, 1), (40, 2)],
)
def test_class_numbers(discriminant: int, h: int) -> None:
    assert class_number(discriminant) == h


def test_principal_class_comes_first() -> None:
    forms = class_representatives(-15)
    assert (forms[0].a, forms[0].b, forms[0].c) == (1, 1, 4)
    assert (forms[1].a, forms[1].b, forms[1].c) == (2, 1, 2)


@pytest.mark.parametrize(
    ("m", "x", "y", "norm"),
    [(2, 1, 1, -1), (3, 2, 1, 1), (5, 0, 1, -1), (10, 3, 1, -1)],
)
def test_fundamental_units(m: int, x: int, y: int, norm: int) -> None:
    unit = fundamental_unit(m)
    assert (unit.x, unit.y, unit.norm) == (x, y, norm)


def test_fundamental_unit_log_of_golden_ratio() -> None:
    assert fundamental_unit(5).log_value == pytest.approx(math.log((1 + math.sqrt(5)) / 2), rel=1e-14)


@pytest.mark.parametrize(
    ("d", "n", "expected"),
    [(-4, 3, -1), (-4, 5, 1), (5, 2, -1), (5, 3, -1), (5, 5, 0), (8, 3, -1), (-3, 2, -1), (-3, 7, 1)],
)
def test_kronecker_symbol(d: int, n: int, expected: int) -> None:
    assert kronecker_symbol(d, n) == expected


def test_roots_of_unity() -> None:
    assert [roots_of_unity_count(m) for m in (-1, -3, -5, 2)] == [4, 6, 2, 2]


def test_unit_search_finds_the_smallest_unit() -> None:
    assert unit_by_search(5) == pytest.approx(math.log((1 + math.sqrt(5)) / 2), rel=1e-14)
    assert unit_by_search(8) == pytest.approx(math.log(1 + math.sqrt(2)), rel=1e-14)
    # 80^2 - 79 * 9^2 = 1
    assert unit_by_search(316) == pytest.approx(math.log(80 + 9 * math.sqrt(79)), rel=1e-12)
    with pytest.raises(InputError):
        unit_by_search(1)


@pytest.mark.parametrize(("m", "h"), [(-23, 3), (-47, 5), (-1, 1), (-3, 1), (10, 2), (79, 3)])
def test_analytic_class_numbers(m: int, h: int) -> None:
    assert analytic_class_data(m)[0] == h


def test_class_number_formula_agrees_with_forms_and_continued_fractions() -> None:
    for m in range(-50, 51):
        if m in (0, 1) or not is_squarefree(m):
            continue
        h, regulator = analytic_class_data(m)
        assert h == class_number(fundamental_discriminant(m)), m
        if m > 0:
            assert regulator == pytest.approx(fundamental_unit(m).log_value, rel=1e-9), m
        else:
            assert regulator == 1.0
