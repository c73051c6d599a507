from __future__ import annotations

import math

import numpy as np
import pytest

from arakzeta.models import NumericError
from arakzeta.quadrature import (
    REQUIRED_AGREEMENTS,
    composite_gauss_legendre,
    composite_nodes,
    integrate_panels,
    trapezoid_slices,
)


def test_composite_nodes_integrate_polynomials_exactly() -> None:
    points, weights = composite_nodes(0.0, 2.0, 3, order=4)
    assert points.shape == (12,)
    assert float(np.sum(weights * points**7)) == pytest.approx(2.0**8 / 8, rel=1e-13)


def test_integrate_panels_on_gaussian() -> None:
    result = integrate_panels(lambda x: np.exp(-x * x), -8.0, 8.0, 1e-13)
    assert result.value.real == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert result.error <= 1e-13 * math.sqrt(math.pi)
    assert result.panels >= 8


def test_integrate_panels_handles_complex_integrands() -> None:
    value = composite_gauss_legendre(lambda x: np.exp(1j * x), 0.0, math.pi, 8)
    assert value == pytest.approx(2j, abs=1e-13)


def test_empty_interval_is_zero() -> None:
    assert integrate_panels(np.sin, 1.0, 1.0, 1e-10).value == 0j


def test_non_convergence_raises() -> None:
    with pytest.raises(NumericError):
        integrate_panels(lambda x: np.sign(x - 0.3), 0.0, 1.0, 1e-15, cap=16, order=2)


def test_trapezoid_slices_cover_the_box() -> None:
    blocks = list(trapezoid_slices(2, 1.0, 0.5))
    nodes = np.concatenate(blocks)
    assert nodes.shape == (25, 2)
    assert np.max(np.abs(nodes)) == 1.0
    assert len(blocks) == 5


def test_coinciding_coarse_estimates_do_not_stop_refinement() -> None:
    # 8 and 16 panels give the same wrong value for this step
    with pytest.raises(NumericError):
        integrate_panels(lambda x: np.sign(x - 0.3), 0.0, 1.0, 1e-15, cap=32, order=2)


def test_convergence_needs_consecutive_agreements() -> None:
    result = integrate_panels(lambda x: x * x, 0.0, 1.0, 1e-12, start=4)
    assert result.panels == 4 * 2**REQUIRED_AGREEMENTS
    assert result.value.real == pytest.approx(1.0 / 3.0, rel=1e-14)
