"""Gamma factors at the infinite places.

``Gamma_R(s) = 2^(-1/2) pi^(-s/2) Gamma(s/2)`` and ``Gamma_C(s) = (2 pi)^(-s) Gamma(s)``.
"""

from __future__ import annotations

import cmath
import math

import mpmath

from .models import PoleError

POLE_GUARD = 1e-12


def _check_gamma_pole(z: complex) -> None:
    nearest = round(z.real)
    if nearest <= 0 and abs(z - nearest) < POLE_GUARD:
        raise PoleError(z, message=f"Gamma has a pole at {nearest}")


def log_gamma(z: complex) -> complex:
    value = complex(z)
    _check_gamma_pole(value)
    return complex(mpmath.loggamma(value))


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


def rgamma(z: complex) -> complex:
    """``1 / Gamma(z)``, entire."""
    return complex(mpmath.rgamma(complex(z)))


def log_gamma_R(s: complex) -> complex:
    s = complex(s)
    return -0.5 * math.log(2.0) - 0.5 * s * math.log(math.pi) + log_gamma(0.5 * s)


def log_gamma_C(s: complex) -> complex:
    s = complex(s)
    return -s * math.log(2.0 * math.pi) + log_gamma(s)


def gamma_R(s: complex) -> complex:
    return cmath.exp(log_gamma_R(s))


def gamma_C(s: complex) -> complex:
    return cmath.exp(log_gamma_C(s))
