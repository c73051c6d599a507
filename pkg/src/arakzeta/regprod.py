"""Zeta-regularized products.

For a sequence ``a_nu`` with multiplicities ``m_nu`` and arguments fixed in
``(-pi, pi]``, ``D(u) = sum m_nu (alpha a_nu)^-u`` and the regularized
product is ``exp(-D'(0))``.  Infinite parts must be arithmetic progressions,
continued through the Hurwitz zeta function.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .archimedean import gamma_C, gamma_R, rgamma
from .ffzeta import CurveData, evaluate_two_var, make_p1, p_coefficients
from .models import DomainError, InputError, NumericError, PoleError

LOGGER = logging.getLogger(__name__)

WORKING_DPS = 30
BERNOULLI_TERMS = 15
EULER_MACLAURIN_SHIFT = 20
MAX_NORMALIZATION_STEPS = 10_000
POLE_GUARD = 1e-12
DEFAULT_ALPHA = 1.0 / (2.0 * math.pi)
TRUNCATION_TOL = 1e-10
MAX_TRUNCATION = 4096


def _rising_factorial_and_derivative(u: mpmath.mpc, order: int) -> Tuple[mpmath.mpc, mpmath.mpc]:
    """``u (u+1) ... (u+order-1)`` and its derivative in ``u``."""
    factors = [u + i for i in range(order)]
    value = mpmath.fprod(factors)
    derivative = mpmath.fsum(
        mpmath.fprod(factor for j, factor in enumerate(factors) if j != i) for i in range(order)
    )
    return value, derivative


def hurwitz_zeta_and_du(u: complex, z: complex) -> Tuple[complex, complex]:
    """``zeta_H(u, z) = sum_{nu >= 0} (z + nu)^-u`` and its ``u``-derivative, by Euler-Maclaurin."""
    u_value = complex(u)
    z_value = complex(z)
    if z_value.real <= 0:
        raise DomainError("the Hurwitz zeta kernel needs Re z > 0")
    if abs(u_value - 1.0) < POLE_GUARD:
        raise PoleError(u_value, 1.0, "zeta_H(u, z) has a pole at u = 1")
    with mpmath.workdps(WORKING_DPS):
        uu = mpmath.mpc(u_value)
        zz = mpmath.mpc(z_value)
        count = max(0, int(math.ceil(EULER_MACLAURIN_SHIFT + abs(u_value) - z_value.real)))
        value = mpmath.mpc(0)
        derivative = mpmath.mpc(0)
        for k in range(count):
            log_term = mpmath.log(zz + k)
            power = mpmath.exp(-uu * log_term)
            value += power
            derivative -= log_term * power

        shifted = zz + count
        log_shifted = mpmath.log(shifted)
        integral = mpmath.exp((1 - uu) * log_shifted) / (uu - 1)
        value += integral
        derivative += -log_shifted * integral - integral / (uu - 1)

        half = mpmath.exp(-uu * log_shifted) / 2
        value += half
        derivative -= log_shifted * half

        for j in range(1, BERNOULLI_TERMS + 1):
            coefficient = mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j)
            rising, rising_du = _rising_factorial_and_derivative(uu, 2 * j - 1)
            power = mpmath.exp(-(uu + 2 * j - 1) * log_shifted)
            value += coefficient * rising * power
            derivative += coefficient * (rising_du - rising * log_shifted) * power
        return complex(value), complex(derivative)


@dataclass(frozen=True, slots=True)
class ArithmeticTail:
    """Terms ``offset + step * nu`` for ``nu >= start``, each with multiplicity ``multiplicity``."""

    offset: complex
    step: complex
    start: int = 0
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.step == 0:
            raise InputError("arithmetic tail step must be non-zero")
        if self.start < 0:
            raise InputError("arithmetic tail start must be non-negative")


@dataclass(frozen=True, slots=True)
class RegularizedSequence:
    terms: Tuple[Tuple[complex, int], ...] = ()
    tails: Tuple[ArithmeticTail, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        for value, multiplicity in self.terms:
            if value == 0:
                raise InputError("regularized sequences cannot contain 0")
            if int(multiplicity) != multiplicity:
                raise InputError("multiplicities must be integers")


def _branch_ok(step: complex, z: complex) -> bool:
    total = cmath.phase(step) + cmath.phase(z)
    return -math.pi < total <= math.pi


def _normalize_tail(tail: ArithmeticTail) -> Tuple[List[complex], complex]:
    """Move leading terms into a finite list until ``step^-u (z + nu)^-u`` is the fixed-branch power."""
    z = complex(tail.offset) / complex(tail.step) + tail.start
    moved: List[complex] = []
    for _ in range(MAX_NORMALIZATION_STEPS):
        if z.real > 0 and _branch_ok(tail.step, z):
            return moved, z
        term = complex(tail.step) * z
        if term == 0:
            raise InputError("regularized sequences cannot contain 0")
        moved.append(term)
        z += 1.0
    raise NumericError(f"arithmetic tail {tail} did not reach a fixed half-plane")


def log_reg_product(seq: RegularizedSequence, alpha: float = 1.0) -> complex:
    """``D'(0)`` for ``D(u) = sum m (alpha a)^-u``."""
    if alpha <= 0:
        raise InputError("alpha must be positive")
    log_alpha = math.log(alpha)
    finite: List[Tuple[complex, int]] = list(seq.terms)
    derivative = 0j
    for tail in seq.tails:
        moved, z = _normalize_tail(tail)
        finite.extend((term, tail.multiplicity) for term in moved)
        value, du = hurwitz_zeta_and_du(0.0, z)
        log_step = log_alpha + cmath.log(complex(tail.step))
        derivative += tail.multiplicity * (du - log_step * value)
    for term, multiplicity in finite:
        derivative -= multiplicity * (log_alpha + cmath.log(complex(term)))
    return derivative


def reg_product(seq: RegularizedSequence, alpha: float = 1.0) -> complex:
    return cmath.exp(-log_reg_product(seq, alpha))


def lerch_closed(alpha: float, z: complex) -> complex:
    """``prod_reg alpha (z + nu) = alpha^(1/2 - z) sqrt(2 pi) / Gamma(z)``."""
    z = complex(z)
    return cmath.exp((0.5 - z) * math.log(alpha)) * math.sqrt(2.0 * math.pi) * rgamma(z)


def lerch_numeric(alpha: float, z: complex) -> complex:
    return reg_product(RegularizedSequence(tails=(ArithmeticTail(complex(z), 1.0),)), alpha)


def translation_residual(alpha: float, z: complex) -> complex:
    """``prod alpha(z + nu) / (alpha z prod alpha(z + 1 + nu)) - 1`` over ``nu >= 0``."""
    z = complex(z)
    whole = lerch_numeric(alpha, z)
    shifted = lerch_numeric(alpha, z + 1.0)
    return whole / (alpha * z * shifted) - 1.0


def _check_gamma_R_argument(s: complex) -> None:
    nearest = round(s.real / 2.0) * 2
    if nearest <= 0 and abs(s - nearest) < POLE_GUARD:
        raise PoleError(s, message=f"Gamma_R has a pole at {nearest}")


def gamma_R_reg_check(s: complex) -> complex:
    """``prod_reg (s + 2 nu) / 2pi * Gamma_R(s) - 1``."""
    s = complex(s)
    _check_gamma_R_argument(s)
    product = reg_product(RegularizedSequence(tails=(ArithmeticTail(s, 2.0),)), DEFAULT_ALPHA)
    return product * gamma_R(s) - 1.0


def gamma_C_reg_check(s: complex) -> complex:
    """``prod_reg`` over ``s + 2 nu`` and ``s + 1 + 2 nu`` times ``Gamma_C(s)``, minus 1."""
    s = complex(s)
    _check_gamma_R_argument(s)
    _check_gamma_R_argument(s + 1.0)
    sequence = RegularizedSequence(tails=(ArithmeticTail(s, 2.0), ArithmeticTail(s + 1.0, 2.0)))
    return reg_product(sequence, DEFAULT_ALPHA) * gamma_C(s) - 1.0


def lattice_sequence(a: complex, period: complex, truncation: int) -> RegularizedSequence:
    """``a + period * nu`` over all ``nu`` in Z: ``|nu| <= truncation`` directly, the rest as two tails."""
    a = complex(a)
    period = complex(period)
    terms = []
    for nu in range(-truncation, truncation + 1):
        term = a + period * nu
        if term == 0:
            raise PoleError(a, message=f"lattice {a} + {period} Z contains 0")
        if term.imag == 0 and term.real < 0:
            raise NumericError(f"lattice term {term} lies on the branch cut; perturb the sample point")
        terms.append((term, 1))
    tails = (
        ArithmeticTail(a + period * (truncation + 1), period),
        ArithmeticTail(a - period * (truncation + 1), -period),
    )
    return RegularizedSequence(tuple(terms), tails)


def lattice_log_product(a: complex, period: complex, alpha: float, truncation: int = 64) -> complex:
    """``log prod_reg alpha (a + period nu)`` over Z, doubling ``truncation`` until stable."""
    current = -log_reg_product(lattice_sequence(a, period, truncation), alpha)
    size = truncation
    while True:
        size *= 2
        if size > MAX_TRUNCATION:
            raise NumericError(f"two-sided product at {a} did not stabilise below K={MAX_TRUNCATION}")
        refined = -log_reg_product(lattice_sequence(a, period, size), alpha)
        # branches may differ by 2 pi i between truncations
        difference = abs(cmath.exp(refined - current) - 1.0)
        current = refined
        if difference < TRUNCATION_TOL:
            return current


def curve_zero_offsets(curve: CurveData, w: complex) -> List[complex]:
    """``rho_j = log beta_j / log q`` for the reciprocal roots ``beta_j`` of ``P_X(T, q^w)``."""
    u = cmath.exp(complex(w) * math.log(curve.q))
    coefficients = [complex(value) for value in p_coefficients(curve, u)]
    if len(coefficients) <= 1:
        return []
    roots = np.roots(coefficients[::-1])
    return [cmath.log(1.0 / complex(root)) / math.log(curve.q) for root in roots]


def ff_regularization_check(
    q: int,
    w: complex,
    s: complex,
    K: int = 64,
    alpha: float = DEFAULT_ALPHA,
    curve: Optional[CurveData] = None,
    target: str = "Z",
) -> complex:
    """Regularized-product candidate for ``Z_X(q^-s, q^w)`` (or ``P_X``) minus the exact value."""
    if target not in {"Z", "P"}:
        raise InputError(f"unknown regularization target '{target}'")
    data = curve if curve is not None else make_p1(q)
    if data.q != q:
        raise InputError(f"curve is defined over F_{data.q}, not F_{q}")
    s = complex(s)
    w = complex(w)
    period = 2j * math.pi / math.log(q)

    log_candidate = 0j
    for rho in curve_zero_offsets(data, w):
        log_candidate += lattice_log_product(s - rho, period, alpha, K)
    if target == "Z":
        for pole in (0j, w):
            log_candidate -= lattice_log_product(s - pole, period, alpha, K)

    T = cmath.exp(-s * math.log(q))
    u = cmath.exp(w * math.log(q))
    exact = evaluate_two_var(data, T, u, which=target)
    candidate = cmath.exp(log_candidate)
    LOGGER.debug(
        "Regularization check | q: %s | w: %s | s: %s | Target: %s | Candidate: %s | Exact: %s",
        q,
        w,
        s,
        target,
        candidate,
        exact,
    )
    return candidate - exact


def finite_product_residual(values: Sequence[Tuple[complex, int]], alpha: float = 1.0) -> float:
    """Relative gap between the regularized and the ordinary product of a finite multiset."""
    product = 1 + 0j
    for value, multiplicity in values:
        product *= (alpha * complex(value)) ** multiplicity
    regularized = reg_product(RegularizedSequence(tuple(values)), alpha)
    return abs(regularized / product - 1.0)
