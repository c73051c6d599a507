from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .models import NumericError

LOGGER = logging.getLogger(__name__)

VectorFunction = Callable[[np.ndarray], np.ndarray]

# successive estimates that must agree before a refinement loop stops
REQUIRED_AGREEMENTS = 2


@dataclass(slots=True)
class QuadratureResult:
    value: complex
    error: float
    panels: int
    abs_value: float = 0.0


@lru_cache(maxsize=8)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def composite_nodes(a: float, b: float, panels: int, order: int = 16) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    points = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    point_weights = (half[:, None] * weights[None, :]).ravel()
    return points, point_weights


def _composite(func: VectorFunction, a: float, b: float, panels: int, order: int) -> Tuple[complex, float]:
    points, point_weights = composite_nodes(a, b, panels, order)
    values = np.asarray(func(points))
    return complex(np.sum(point_weights * values)), float(np.sum(point_weights * np.abs(values)))


def composite_gauss_legendre(func: VectorFunction, a: float, b: float, panels: int, order: int = 16) -> complex:
    return _composite(func, a, b, panels, order)[0]


def integrate_panels(
    func: VectorFunction,
    a: float,
    b: float,
    tol: float,
    *,
    start: int = 4,
    cap: int = 1024,
    order: int = 16,
) -> QuadratureResult:
    """Composite Gauss-Legendre with panel doubling.

    Stops once ``REQUIRED_AGREEMENTS`` consecutive doublings each change the
    result by at most ``tol * max(1, |I|)``.
    """
    if b <= a:
        return QuadratureResult(0j, 0.0, 0)
    panels = start
    value, _ = _composite(func, a, b, panels, order)
    agreements = 0
    worst = 0.0
    while True:
        panels *= 2
        if panels > cap:
            raise NumericError(
                f"Gauss-Legendre quadrature on [{a:.6g}, {b:.6g}] did not converge within {cap} panels"
            )
        refined, magnitude = _composite(func, a, b, panels, order)
        difference = abs(refined - value)
        value = refined
        if difference > tol * max(1.0, abs(refined)):
            agreements = 0
            worst = 0.0
            continue
        agreements += 1
        worst = max(worst, difference)
        if agreements >= REQUIRED_AGREEMENTS:
            LOGGER.debug(
                "Quadrature converged | Interval: [%.6g, %.6g] | Panels: %s | Difference: %.3e",
                a,
                b,
                panels,
                difference,
            )
            return QuadratureResult(refined, worst, panels, magnitude)


def trapezoid_slices(dim: int, radius: float, step: float) -> Iterator[np.ndarray]:
    """Nodes of the uniform grid ``step * Z^dim`` inside ``[-radius, radius]^dim``.

    Yields one block of shape ``(k, dim)`` per value of the first coordinate.
    """
    count = int(np.floor(radius / step))
    axis = step * np.arange(-count, count + 1)
    if dim == 1:
        yield axis[:, None]
        return
    rest = np.stack(np.meshgrid(*([axis] * (dim - 1)), indexing="ij"), axis=-1).reshape(-1, dim - 1)
    for value in axis:
        block = np.empty((rest.shape[0], dim))
        block[:, 0] = value
        block[:, 1:] = rest
        yield block
