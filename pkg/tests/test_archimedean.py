from __future__ import annotations

import math

import pytest

from arakzeta.archimedean import gamma, gamma_C, gamma_R, log_gamma, rgamma
from arakzeta.models import PoleError


def test_gamma_R_normalisation() -> None:
    assert gamma_R(1) == pytest.approx(2.0**-0.5, rel=1e-14)
    assert gamma_R(2) == pytest.approx(2.0**-0.5 / math.pi, rel=1e-14)


def test_gamma_C_at_one() -> None:
    assert gamma_C(1) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-14)


def test_duplication_relates_real_and_complex_factors() -> None:
    s = 0.7 + 1.3j
    assert gamma_R(s) * gamma_R(s + 1) == pytest.approx(gamma_C(s), rel=1e-12)


def test_log_gamma_is_the_principal_branch_continuation() -> None:
    assert log_gamma(5) == pytest.approx(math.log(24.0), rel=1e-14)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_poles_and_reciprocal_gamma() -> None:
    with pytest.raises(PoleError):
        gamma(-2)
    with pytest.raises(PoleError):
        gamma_R(0)
    assert rgamma(-3) == 0
