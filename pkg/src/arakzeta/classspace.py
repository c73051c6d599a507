"""Sampling and integration on the degree-zero Arakelov class group.

The group is parametrised as (ideal class) x (torus of unit directions).
Torus coordinates ``theta`` map to ``x = x0 + sum_i theta_i * u_i`` where the
``u_i`` are the unit log vectors; the Haar measure is normalised so the whole
space has volume ``h * R``.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .arakelov import ArakelovDivisor
from .fielddata import NumberFieldData, place_weights
from .models import InputError, NumericError
from .quadrature import REQUIRED_AGREEMENTS

LOGGER = logging.getLogger(__name__)

DEFAULT_REFINE_CAP = 2**14


@dataclass(frozen=True, slots=True)
class ClassSpacePoint:
    class_index: int
    theta: Tuple[float, ...]
    divisor: ArakelovDivisor


@dataclass(frozen=True, slots=True)
class ClassSpaceGrid:
    points_per_dim: int
    offset: Tuple[float, ...]
    classes: Tuple[Tuple[Tuple[ClassSpacePoint, float], ...], ...]

    @property
    def total_weight(self) -> float:
        return math.fsum(weight for entries in self.classes for _, weight in entries)

    @property
    def points(self) -> List[ClassSpacePoint]:
        return [point for entries in self.classes for point, _ in entries]

    @property
    def weights(self) -> np.ndarray:
        return np.array([weight for entries in self.classes for _, weight in entries])

    def __len__(self) -> int:
        return sum(len(entries) for entries in self.classes)


def base_divisor(field: NumberFieldData, class_index: int, theta: Sequence[float]) -> ArakelovDivisor:
    """Divisor of Arakelov norm 1 on ideal class ``class_index`` at torus point ``theta``."""
    norm = field.ideal_classes[class_index].norm
    x = place_weights(field) * math.log(norm) / field.degree_n
    for coefficient, unit in zip(theta, field.unit_logs):
        x = x + coefficient * np.asarray(unit)
    return ArakelovDivisor(class_index, tuple(float(value) for value in x))


def build_grid(
    field: NumberFieldData,
    points_per_dim: int,
    offset: Optional[Sequence[float]] = None,
) -> ClassSpaceGrid:
    """Product midpoint rule on ``[0, 1)^r`` for every ideal class."""
    if isinstance(points_per_dim, bool) or int(points_per_dim) != points_per_dim or points_per_dim < 1:
        raise InputError("points_per_dim must be a positive integer")
    rank = field.unit_rank_r
    shift = tuple(float(value) for value in (offset or (0.0,) * rank))
    if len(shift) != rank:
        raise InputError(f"offset must have {rank} entries")

    if rank == 0:
        thetas: List[Tuple[float, ...]] = [()]
        weight = field.regulator
    else:
        midpoints = (np.arange(points_per_dim) + 0.5) / points_per_dim
        thetas = [
            tuple(float((value + delta) % 1.0) for value, delta in zip(combo, shift))
            for combo in itertools.product(midpoints, repeat=rank)
        ]
        weight = field.regulator / points_per_dim**rank

    classes = tuple(
        tuple(
            (ClassSpacePoint(index, theta, base_divisor(field, index, theta)), weight)
            for theta in thetas
        )
        for index in range(field.class_number_h)
    )
    grid = ClassSpaceGrid(points_per_dim=int(points_per_dim), offset=shift, classes=classes)
    LOGGER.debug(
        "Class space grid | Field: %s | Points per dim: %s | Points: %s | Total weight: %.12g",
        field,
        points_per_dim,
        len(grid),
        grid.total_weight,
    )
    return grid


def torus_displacement(point: ClassSpacePoint) -> np.ndarray:
    """Torus coordinates wrapped to ``[-1/2, 1/2)``."""
    theta = np.asarray(point.theta, dtype=float)
    return (theta + 0.5) % 1.0 - 0.5


def evaluate_points(
    grid: ClassSpaceGrid,
    func: Callable[[ClassSpacePoint], complex],
    threads: Optional[int] = None,
) -> np.ndarray:
    """``func`` at every grid point, in grid order."""
    points = grid.points
    if threads and threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            values = list(executor.map(func, points))
    else:
        values = [func(point) for point in points]
    return np.array(values, dtype=complex)


def integrate(
    field: NumberFieldData,
    grid: ClassSpaceGrid,
    func: Callable[[ClassSpacePoint], complex],
    threads: Optional[int] = None,
) -> complex:
    values = evaluate_points(grid, func, threads)
    return complex(np.sum(grid.weights * values))


def integrate_refined(
    field: NumberFieldData,
    func: Callable[[ClassSpacePoint], complex],
    tol: float,
    *,
    start: int = 8,
    cap: int = DEFAULT_REFINE_CAP,
    threads: Optional[int] = None,
) -> Tuple[complex, float, ClassSpaceGrid]:
    """Double the grid until ``REQUIRED_AGREEMENTS`` consecutive integrals agree within ``tol``.

    Returns the value, the largest difference of the agreeing run and the final grid.
    """
    grid = build_grid(field, start)
    value = integrate(field, grid, func, threads)
    if field.unit_rank_r == 0:
        return value, 0.0, grid
    points = start
    agreements = 0
    worst = 0.0
    while True:
        points *= 2
        if points > cap:
            raise NumericError(f"grid refinement did not reach {tol:g} below {cap} points per dimension")
        grid = build_grid(field, points)
        refined = integrate(field, grid, func, threads)
        difference = abs(refined - value)
        LOGGER.debug(
            "Grid refinement | Points per dim: %s | Value: %s | Difference: %.3e",
            points,
            refined,
            difference,
        )
        value = refined
        if difference > tol:
            agreements = 0
            worst = 0.0
            continue
        agreements += 1
        worst = max(worst, difference)
        if agreements >= REQUIRED_AGREEMENTS:
            return value, worst, grid
