"""Oscillatory integrals over the Arakelov class group and their closed forms.

``C(s)`` integrates ``nu(D) a(D)^(-s)`` over the degree-zero class group; its
behaviour for large ``s`` is governed by integrals of
``(sum_i c_i exp(-nu_i x_i))^(-s)`` over the hyperplane ``sum_i x_i = 0``.
Hyperplane measures use the drop-one-coordinate chart.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from .archimedean import log_gamma
from .cache import DEFAULT_CACHE, GridCache
from .classspace import ClassSpaceGrid, torus_displacement
from .fielddata import NumberFieldData
from .models import CapabilityError, DomainError, InputError, NumericError
from .quadrature import composite_nodes, integrate_panels, trapezoid_slices

LOGGER = logging.getLogger(__name__)

MAX_ORACLE_DIMENSION = 4
MIN_TRAPEZOID_STEP = 1.0 / 64.0


@dataclass(frozen=True, slots=True)
class HyperplaneIntegralSpec:
    c: Tuple[float, ...]
    nu: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.c) != len(self.nu):
            raise InputError("c and nu must have the same length")
        if len(self.c) < 2:
            raise InputError("hyperplane integrals need N >= 2")
        if any(value <= 0 for value in self.c):
            raise InputError("all c_i must be positive")
        if any(int(value) != value or value <= 0 for value in self.nu):
            raise InputError("all nu_i must be positive integers")

    @property
    def N(self) -> int:
        return len(self.c)

    @property
    def q_exp(self) -> float:
        return 1.0 / math.fsum(1.0 / value for value in self.nu)


def hyperplane_spec_for_field(field: NumberFieldData) -> HyperplaneIntegralSpec:
    """``||zeta||^2_D`` near ``D = 0``: ``c = 1, nu = 2`` per real place, ``c = 2, nu = 1`` per complex place."""
    return HyperplaneIntegralSpec(
        c=(1.0,) * field.r1 + (2.0,) * field.r2,
        nu=(2,) * field.r1 + (1,) * field.r2,
    )


def _log_hyperplane_closed(spec: HyperplaneIntegralSpec, s: complex) -> complex:
    q = spec.q_exp
    value = math.log(q) - math.fsum(math.log(nu) for nu in spec.nu)
    value -= s * math.fsum(q / nu * math.log(c) for c, nu in zip(spec.c, spec.nu))
    value -= log_gamma(s)
    for nu in spec.nu:
        value += log_gamma(q * s / nu)
    return value


def hyperplane_integral_closed(spec: HyperplaneIntegralSpec, s: complex) -> complex:
    s = complex(s)
    if s.real <= 0:
        raise DomainError("the closed form needs Re s > 0")
    return cmath.exp(_log_hyperplane_closed(spec, s))


def _chart_log_sum(spec: HyperplaneIntegralSpec, chart: np.ndarray, drop: int) -> np.ndarray:
    """``log sum_i c_i exp(-nu_i x_i)`` with ``x`` rebuilt from drop-one chart coordinates."""
    full = np.insert(chart, drop, -chart.sum(axis=1), axis=1)
    terms = np.log(np.asarray(spec.c))[None, :] - np.asarray(spec.nu, dtype=float)[None, :] * full
    return logsumexp(terms, axis=1)


def truncation_radius(spec: HyperplaneIntegralSpec, sigma: float, tol: float) -> float:
    """Smallest half-width (step 0.5) of the chart box whose exterior contributes less than ``tol``."""
    m = spec.N - 1
    kappa = sigma * min(spec.nu) / (spec.N - 1)
    log_c = -sigma * math.log(min(spec.c))
    radius = 1.0
    previous = math.inf
    while True:
        log_bound = log_c + math.log(2.0 * m) + (m - 1) * math.log(2.0 * radius) - kappa * radius - math.log(kappa)
        if log_bound < math.log(tol) and log_bound < previous:
            return radius
        previous = log_bound
        radius += 0.5
        if radius > 1e4:
            raise NumericError("hyperplane truncation radius search did not terminate")


def _trapezoid(spec: HyperplaneIntegralSpec, s: complex, radius: float, step: float, drop: int) -> complex:
    m = spec.N - 1
    total = 0j
    for block in trapezoid_slices(m, radius, step):
        total += complex(np.sum(np.exp(-s * _chart_log_sum(spec, block, drop))))
    return total * step**m


def hyperplane_integral_numeric(
    spec: HyperplaneIntegralSpec,
    s: complex,
    tol: float = 1e-10,
    drop: Optional[int] = None,
) -> complex:
    """Trapezoid rule on the chart dropping coordinate ``drop`` (default the last)."""
    s = complex(s)
    if spec.N > MAX_ORACLE_DIMENSION:
        raise CapabilityError(f"quadrature oracle supports N <= {MAX_ORACLE_DIMENSION}, got {spec.N}")
    if s.real < 1:
        raise DomainError("the quadrature oracle needs Re s >= 1")
    index = spec.N - 1 if drop is None else drop
    if not 0 <= index < spec.N:
        raise InputError(f"drop index {index} out of range")
    radius = truncation_radius(spec, s.real, tol)
    step = 0.5
    value = _trapezoid(spec, s, radius, step, index)
    while True:
        step /= 2.0
        if step < MIN_TRAPEZOID_STEP:
            raise NumericError(f"trapezoid rule did not reach {tol:g} for N={spec.N}, s={s}")
        refined = _trapezoid(spec, s, radius, step, index)
        difference = abs(refined - value)
        value = refined
        if difference <= tol * max(1.0, abs(refined)):
            LOGGER.debug(
                "Hyperplane quadrature | N: %s | s: %s | Radius: %s | Step: %s | Difference: %.3e",
                spec.N,
                s,
                radius,
                step,
                difference,
            )
            return value


def extreme_coordinates_bounded(x: np.ndarray, slack: float = 1e-12) -> np.ndarray:
    """For points on ``sum x_i = 0``: ``max x_i >= ||x||/(N-1)`` and ``min x_i <= -||x||/(N-1)``."""
    samples = np.atleast_2d(np.asarray(x, dtype=float))
    bound = np.max(np.abs(samples), axis=1) / (samples.shape[1] - 1)
    tolerance = slack * np.maximum(1.0, bound)
    upper = np.max(samples, axis=1) >= bound - tolerance
    lower = np.min(samples, axis=1) <= -bound + tolerance
    return upper & lower


def alpha_k(field: NumberFieldData) -> float:
    n = field.degree_n
    r = field.unit_rank_r
    return (math.pi * n) ** (r / 2.0) * 2.0 ** (-field.r1 / 2.0) * math.sqrt(2.0 / n)


def _grid_invariant_arrays(
    field: NumberFieldData,
    grid: ClassSpaceGrid,
    cache: GridCache,
    band: float,
    threads: Optional[int],
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    invariants = cache.invariants(field, grid, band, threads)
    a = np.array([item.a for item in invariants])
    nu = np.array([item.nu for item in invariants], dtype=float)
    return grid.weights, a, nu


def _scaled_C(
    field: NumberFieldData,
    grid: ClassSpaceGrid,
    s: complex,
    log_scale: float,
    cache: GridCache,
    band: float,
    threads: Optional[int],
) -> complex:
    """``exp(s * log_scale) * C(s)``, summed without leaving the float range."""
    weights, a, nu = _grid_invariant_arrays(field, grid, cache, band, threads)
    exponents = -complex(s) * (np.log(a) - log_scale)
    return complex(np.sum(weights * nu * np.exp(exponents)))


def C_integral(
    field: NumberFieldData,
    grid: ClassSpaceGrid,
    s: complex,
    *,
    cache: GridCache = DEFAULT_CACHE,
    band: float = 1e-9,
    threads: Optional[int] = None,
) -> complex:
    return _scaled_C(field, grid, s, 0.0, cache, band, threads)


def asymptotic_ratio(
    field: NumberFieldData,
    grid: ClassSpaceGrid,
    s: complex,
    *,
    cache: GridCache = DEFAULT_CACHE,
    band: float = 1e-9,
    threads: Optional[int] = None,
) -> complex:
    """``C(s) s^(r/2) n^s / (|mu| alpha_k)``, which tends to 1."""
    n = field.degree_n
    scaled = _scaled_C(field, grid, s, math.log(n), cache, band, threads)
    return scaled * complex(s) ** (field.unit_rank_r / 2.0) / (field.mu_count * alpha_k(field))


def gamma_closed_form(field: NumberFieldData, s: complex) -> complex:
    s = complex(s)
    if field.unit_rank_r == 0:
        raise DomainError("the closed form needs unit rank r >= 1")
    if s.real <= 0:
        raise DomainError("the closed form needs Re s > 0")
    n = field.degree_n
    log_value = -math.log(n) + (1 - field.r1) * math.log(2.0) - 2.0 * s * field.r2 / n * math.log(2.0)
    log_value += -log_gamma(s) + field.r1 * log_gamma(s / n) + field.r2 * log_gamma(2.0 * s / n)
    return cmath.exp(log_value)


def local_window(field: NumberFieldData, fraction: float = 0.49) -> float:
    """Sup-norm radius whose window keeps every torus coordinate below ``fraction``.

    Windows no wider than this are covered once by the wrapped torus, so
    ``C_integral_local`` and ``hyperplane_integral_local`` see the same region.
    """
    if not 0 < fraction < 0.5:
        raise InputError("fraction must lie in (0, 1/2)")
    r = field.unit_rank_r
    if r == 0:
        return fraction
    units = np.array(field.unit_logs, dtype=float).reshape(r, field.place_count)
    inverse = np.linalg.inv(units[:, :r])
    return fraction / float(np.max(np.abs(inverse).sum(axis=0)))


def C_integral_local(
    field: NumberFieldData,
    grid: ClassSpaceGrid,
    s: complex,
    eps: float,
    *,
    cache: GridCache = DEFAULT_CACHE,
    band: float = 1e-9,
    threads: Optional[int] = None,
    log_scale: float = 0.0,
) -> complex:
    """``exp(s * log_scale) C(s)`` restricted to principal-class points with ``||x||_inf < eps``."""
    weights, a, nu = _grid_invariant_arrays(field, grid, cache, band, threads)
    units = np.array(field.unit_logs, dtype=float).reshape(field.unit_rank_r, field.place_count)
    mask = np.zeros(len(weights), dtype=bool)
    for index, point in enumerate(grid.points):
        if point.class_index != 0:
            continue
        x = torus_displacement(point) @ units if field.unit_rank_r else np.zeros(field.place_count)
        mask[index] = bool(np.max(np.abs(x)) < eps)
    exponents = -complex(s) * (np.log(a[mask]) - log_scale)
    return complex(np.sum(weights[mask] * nu[mask] * np.exp(exponents)))


def hyperplane_integral_local(
    field: NumberFieldData,
    s: complex,
    eps: float,
    tol: float = 1e-10,
    *,
    log_scale: float = 0.0,
) -> complex:
    """``|mu| * int_{||x||_inf < eps} (exp(-log_scale) sum c_v exp(-nu_v x_v))^(-s)`` over the hyperplane."""
    spec_c = np.array((1.0,) * field.r1 + (2.0,) * field.r2)
    spec_nu = np.array((2.0,) * field.r1 + (1.0,) * field.r2)
    s = complex(s)
    m = field.unit_rank_r

    def integrand(chart: np.ndarray) -> np.ndarray:
        full = np.concatenate([chart, -chart.sum(axis=1, keepdims=True)], axis=1)
        log_f = logsumexp(np.log(spec_c)[None, :] - spec_nu[None, :] * full, axis=1)
        return np.exp(-s * (log_f - log_scale))

    if m == 0:
        return field.mu_count * complex(integrand(np.zeros((1, 0)))[0])
    if m == 1:
        result = integrate_panels(lambda y: integrand(y[:, None]), -eps, eps, tol)
        return field.mu_count * result.value
    if m == 2:
        # inner limits are piecewise linear in the outer variable, with a kink at 0
        def outer(y1: np.ndarray) -> np.ndarray:
            values = np.empty(y1.shape, dtype=complex)
            for index, first in enumerate(y1):
                low = max(-eps, -eps - first)
                high = min(eps, eps - first)
                points, point_weights = composite_nodes(low, high, 8)
                chart = np.column_stack([np.full(points.shape, first), points])
                values[index] = np.sum(point_weights * integrand(chart))
            return values

        total = integrate_panels(outer, -eps, 0.0, tol).value + integrate_panels(outer, 0.0, eps, tol).value
        return field.mu_count * total
    raise CapabilityError("local hyperplane integrals are implemented for unit rank <= 2")


def A_factor(
    field: NumberFieldData,
    grid: ClassSpaceGrid,
    s: complex,
    *,
    cache: GridCache = DEFAULT_CACHE,
    band: float = 1e-9,
    threads: Optional[int] = None,
) -> complex:
    """``(n/2) pi^(-ns/2) Gamma(ns/2) C(ns/2)``."""
    n = field.degree_n
    z = n * complex(s) / 2.0
    prefactor = cmath.exp(-z * math.log(math.pi) + log_gamma(z))
    return 0.5 * n * prefactor * C_integral(field, grid, z, cache=cache, band=band, threads=threads)


def A_factor_mellin(
    field: NumberFieldData,
    grid: ClassSpaceGrid,
    s: complex,
    tol: float = 1e-10,
    *,
    cache: GridCache = DEFAULT_CACHE,
    band: float = 1e-9,
    threads: Optional[int] = None,
) -> complex:
    """``int_0^inf int nu exp(-pi t^(-2/n) a) dD t^(-s) dt/t`` by quadrature in ``log t``."""
    s = complex(s)
    if s.real <= 0:
        raise DomainError("the Mellin integral converges only for Re s > 0")
    n = field.degree_n
    weights, a, nu = _grid_invariant_arrays(field, grid, cache, band, threads)
    log_mass = math.log(float(np.sum(weights * nu)))
    a_min = float(np.min(a))
    target = math.log(tol) - 5.0

    low = 0.0
    while log_mass - math.pi * a_min * math.exp(-2.0 * low / n) - s.real * low >= target:
        low -= 0.5
    high = max(0.5, (log_mass - target) / s.real)

    def integrand(u: np.ndarray) -> np.ndarray:
        damping = np.exp(-math.pi * np.outer(np.exp(-2.0 * u / n), a))
        return (damping @ (weights * nu)) * np.exp(-s * u)

    return integrate_panels(integrand, low, high, tol, cap=8192).value


def C_tilde(
    field: NumberFieldData,
    grid: ClassSpaceGrid,
    s: complex,
    *,
    cache: GridCache = DEFAULT_CACHE,
    band: float = 1e-9,
    threads: Optional[int] = None,
) -> complex:
    """``2^(r1/2) sqrt(n/2) int (nu/|mu|) (a/n)^(-ns/2) dD``."""
    n = field.degree_n
    z = n * complex(s) / 2.0
    scaled = _scaled_C(field, grid, z, math.log(n), cache, band, threads)
    return 2.0 ** (field.r1 / 2.0) * math.sqrt(n / 2.0) * scaled / field.mu_count


def field_hyperplane_closed(field: NumberFieldData, s: complex) -> complex:
    """Closed form of the hyperplane integral attached to ``field``."""
    return hyperplane_integral_closed(hyperplane_spec_for_field(field), s)


def random_hyperplane_points(rng: np.random.Generator, count: int, dimension: int, spread: float = 10.0) -> np.ndarray:
    samples = rng.uniform(-spread, spread, size=(count, dimension))
    return samples - samples.mean(axis=1, keepdims=True)
