"""Two-variable zeta functions of number fields.

All evaluations run through the entire integral

    J(s, w) = int_0^sqrt(d) int_{CH^0} w^-1 (k0(D + D_t)^w - 1) dD t^-s dt/t

in the variable ``u = log t``.  Values of ``k0`` come from the relative theta
profiles cached per grid; above ``t = sqrt(d)`` they are obtained through
Riemann-Roch from the profiles of ``kappa - D``.
"""

from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import mpmath
import numpy as np

from .archimedean import gamma_C, gamma_R
from .arakelov import ThetaProfile
from .cache import DEFAULT_CACHE, GridCache
from .classspace import ClassSpaceGrid, build_grid
from .config import RunSettings
from .fielddata import NumberFieldData, require_quadratic_character
from .models import DomainError, InputError, NumericError, PoleError, TwoVarZetaValue
from .oscint import A_factor
from .quadratic import kronecker_symbol
from .quadrature import composite_gauss_legendre, integrate_panels

LOGGER = logging.getLogger(__name__)

POLE_GUARD = 1e-8
CUTOFF_STEP = 0.25
MAX_CUTOFF_STEPS = 200
QUADRATURE_PANEL_CAP = 4096
ORACLE_MIN_REAL = 1.5


@dataclass(slots=True)
class ZetaEvalParams:
    grid: ClassSpaceGrid
    t_tol: float = 1e-10
    theta_tol: float = 1e-10
    w_small: float = 1e-6
    band: float = 1e-9
    threads: Optional[int] = None
    cache: GridCache = DEFAULT_CACHE
    refine_grid: bool = True

    def __post_init__(self) -> None:
        for name in ("t_tol", "theta_tol"):
            value = getattr(self, name)
            if not 0 < value <= 1e-3:
                raise InputError(f"'{name}' must lie in (0, 1e-3]")
        if self.w_small <= 0:
            raise InputError("'w_small' must be greater than 0")

    @classmethod
    def from_settings(
        cls,
        field: NumberFieldData,
        settings: RunSettings,
        *,
        cache: GridCache = DEFAULT_CACHE,
    ) -> "ZetaEvalParams":
        return cls(
            grid=build_grid(field, settings.grid),
            t_tol=settings.t_tol,
            theta_tol=settings.theta_tol,
            w_small=settings.w_small,
            band=settings.band,
            threads=settings.threads,
            cache=cache,
        )


def expm1_complex(z: np.ndarray) -> np.ndarray:
    """``exp(z) - 1`` without cancellation for small ``|z|``."""
    values = np.asarray(z, dtype=complex)
    x = values.real
    y = values.imag
    real = np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2
    imag = np.exp(x) * np.sin(y)
    return real + 1j * imag


def power_quotient(excess: np.ndarray, w: complex, w_small: float) -> np.ndarray:
    """``w^-1 ((1 + excess)^w - 1)``, continued to ``log(1 + excess)`` at ``w = 0``."""
    log_y = np.log1p(np.asarray(excess, dtype=float))
    if abs(w) >= w_small:
        return expm1_complex(w * log_y) / w
    return log_y + 0.5 * w * log_y**2


@dataclass(slots=True)
class _ThetaSide:
    field: NumberFieldData
    weights: np.ndarray
    profiles: List[ThetaProfile]
    kind: str
    threads: Optional[int] = None

    @property
    def a_min(self) -> float:
        return min(profile.minimum for profile in self.profiles)

    def scales(self, u: np.ndarray) -> np.ndarray:
        exponent = -2.0 if self.kind == "direct" else 2.0
        return np.exp(exponent * np.asarray(u, dtype=float) / self.field.degree_n)

    def point_values(self, u: np.ndarray, w: complex, w_small: float) -> np.ndarray:
        """Rows of ``w^-1 (theta^w - 1)``, one per grid point."""
        scales = np.atleast_1d(self.scales(u))

        def row(profile: ThetaProfile) -> np.ndarray:
            return power_quotient(np.atleast_1d(profile.excess(scales)), w, w_small)

        if self.threads and self.threads > 1 and len(self.profiles) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as executor:
                rows = list(executor.map(row, self.profiles))
        else:
            rows = [row(profile) for profile in self.profiles]
        return np.vstack(rows)

    def values(self, u: np.ndarray, w: complex, w_small: float) -> np.ndarray:
        return self.weights @ self.point_values(u, w, w_small)


def _theta_side(field: NumberFieldData, params: ZetaEvalParams, grid: ClassSpaceGrid, kind: str) -> _ThetaSide:
    profiles = params.cache.theta_profiles(field, grid, params.theta_tol, kind, params.threads)
    return _ThetaSide(field, grid.weights, profiles, kind, params.threads)


def _coarse_grid(field: NumberFieldData, grid: ClassSpaceGrid) -> Optional[ClassSpaceGrid]:
    if field.unit_rank_r == 0 or grid.points_per_dim < 2:
        return None
    return build_grid(field, grid.points_per_dim // 2, grid.offset)


def _weighted(values: np.ndarray, exponent: np.ndarray) -> np.ndarray:
    """``values * exp(exponent)`` with zero wherever ``values`` underflowed."""
    with np.errstate(over="ignore", invalid="ignore"):
        return np.where(values == 0, 0j, values * np.exp(exponent))


def _cutoff(
    side: _ThetaSide,
    params: ZetaEvalParams,
    w: complex,
    alpha: complex,
    beta: complex,
    u_mid: float,
) -> Tuple[float, float]:
    """Walk away from ``u_mid`` until the fitted tail envelope drops below ``t_tol / 10``.

    Returns the cutoff and the envelope value there.
    """
    direction = -1.0 if side.kind == "direct" else 1.0
    a_min = side.a_min
    log_mass = math.log(2.0 * float(np.sum(side.weights)))
    log_c1 = -math.inf
    running = 0.0
    previous = math.inf
    for step in range(1, MAX_CUTOFF_STEPS + 1):
        u = u_mid + direction * step * CUTOFF_STEP
        sigma = float(side.scales(np.array([u]))[0])
        magnitudes = np.abs(side.point_values(np.array([u]), w, params.w_small)[:, 0])
        nonzero = magnitudes > 0
        if np.any(nonzero):
            log_c1 = max(log_c1, float(np.max(np.log(magnitudes[nonzero]))) + math.pi * a_min * sigma)
        exponent = alpha + beta * u
        mass = float(np.sum(side.weights * magnitudes))
        if mass > 0:
            running += math.exp(math.log(mass * CUTOFF_STEP) + exponent.real)
        log_envelope = log_mass + log_c1 - math.pi * a_min * sigma + exponent.real
        if log_envelope < math.log(params.t_tol / 10.0 * max(1.0, running)) and log_envelope < previous:
            return u, math.exp(log_envelope)
        previous = log_envelope
    raise NumericError(
        f"{side.field}: theta tail did not decay within {MAX_CUTOFF_STEPS} steps of {CUTOFF_STEP} (s-shift {beta})"
    )


def _side_integral(
    field: NumberFieldData,
    params: ZetaEvalParams,
    kind: str,
    w: complex,
    alpha: complex,
    beta: complex,
) -> Tuple[complex, float]:
    """``int H_kind(u, w) exp(alpha + beta u) du`` on the half-line beyond ``log sqrt(d)``."""
    u_mid = 0.5 * math.log(field.disc_abs)
    side = _theta_side(field, params, params.grid, kind)
    u_cut, tail = _cutoff(side, params, w, alpha, beta, u_mid)
    low, high = sorted((u_cut, u_mid))

    def integrand_for(current: _ThetaSide):
        def integrand(u: np.ndarray) -> np.ndarray:
            return _weighted(current.values(u, w, params.w_small), alpha + beta * u)

        return integrand

    result = integrate_panels(integrand_for(side), low, high, params.t_tol, cap=QUADRATURE_PANEL_CAP)
    error = result.error + tail + params.theta_tol * result.abs_value

    coarse = _coarse_grid(field, params.grid) if params.refine_grid else None
    refinement = 0.0
    if coarse is not None:
        coarse_side = _theta_side(field, params, coarse, kind)
        coarse_value = composite_gauss_legendre(integrand_for(coarse_side), low, high, result.panels)
        refinement = abs(result.value - coarse_value)
        error += refinement

    LOGGER.debug(
        "Theta integral | Field: %s | Side: %s | w: %s | Range: [%.4f, %.4f] | Panels: %s "
        "| Tail: %.3e | Grid diff: %.3e",
        field,
        kind,
        w,
        low,
        high,
        result.panels,
        tail,
        refinement,
    )
    return result.value, error


def _scaled_J(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> Tuple[complex, float]:
    """``d^(s/2) J(s, w)``."""
    log_root = 0.5 * math.log(field.disc_abs)
    return _side_integral(field, params, "direct", w, s * log_root, -s)


def J(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> TwoVarZetaValue:
    s = complex(s)
    w = complex(w)
    value, error = _scaled_J(field, params, s, w)
    scale = cmath.exp(-0.5 * s * math.log(field.disc_abs))
    return TwoVarZetaValue(value * scale, error * abs(scale), s, w)


def J_bound(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> float:
    """Majorant ``c1 hR int_0^sqrt(d) exp(-pi n t^(-2/n)) t^(-Re s) dt/t`` with ``c1`` fitted on samples."""
    s = complex(s)
    w = complex(w)
    n = field.degree_n
    side = _theta_side(field, params, params.grid, "direct")
    u_mid = 0.5 * math.log(field.disc_abs)
    samples = u_mid - CUTOFF_STEP * np.arange(0, MAX_CUTOFF_STEPS)
    sigma = side.scales(samples)
    keep = math.pi * n * sigma < 700.0
    samples = samples[keep]
    sigma = sigma[keep]
    magnitudes = np.abs(side.point_values(samples, w, params.w_small))
    with np.errstate(divide="ignore"):
        log_ratio = np.log(np.max(magnitudes, axis=0)) + math.pi * n * sigma
    log_c1 = float(np.max(log_ratio))
    log_hr = math.log(field.hR)

    def majorant(u: np.ndarray) -> np.ndarray:
        return np.exp(log_c1 + log_hr - math.pi * n * side.scales(u) - s.real * u)

    low = float(samples[-1])
    return integrate_panels(majorant, low, u_mid, params.t_tol, cap=QUADRATURE_PANEL_CAP).value.real


def _check_poles(field: NumberFieldData, s: complex, w: complex) -> None:
    hr = field.hR
    if abs(s) < POLE_GUARD:
        residue = -hr / w if abs(w) >= POLE_GUARD else None
        raise PoleError(s, residue, f"w^-1 zeta_X(s, {w}) has a pole at s = 0")
    if abs(s - w) < POLE_GUARD:
        residue = hr / w if abs(w) >= POLE_GUARD else None
        raise PoleError(s, residue, f"w^-1 zeta_X(s, {w}) has a pole at s = w")


def _J_pair(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> Tuple[complex, float]:
    """``d^(s/2) J(s, w) + d^((w-s)/2) J(w-s, w)``."""
    first, first_error = _scaled_J(field, params, s, w)
    if abs((w - s) - s) < 1e-15:
        return 2.0 * first, 2.0 * first_error
    second, second_error = _scaled_J(field, params, w - s, w)
    return first + second, first_error + second_error


def zeta_over_w(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> TwoVarZetaValue:
    """``w^-1 zeta_X(s, w)``, holomorphic in ``w`` including ``w = 0``."""
    s = complex(s)
    w = complex(w)
    _check_poles(field, s, w)
    pair, error = _J_pair(field, params, s, w)
    value = pair - field.hR / (s * (w - s))
    return TwoVarZetaValue(value, error, s, w)


def zeta_Xk(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> TwoVarZetaValue:
    s = complex(s)
    w = complex(w)
    try:
        inner = zeta_over_w(field, params, s, w)
    except PoleError as exc:
        residue = None if exc.residue is None else exc.residue * w
        raise PoleError(s, residue, f"zeta_X(s, {w}) has a pole at s = {s}") from exc
    return TwoVarZetaValue(w * inner.value, abs(w) * inner.est_error, s, w)


def _normalization(field: NumberFieldData, s: complex) -> complex:
    """``(2^(r1/2) / |mu|) d^(-s/2)``."""
    log_value = 0.5 * field.r1 * math.log(2.0) - math.log(field.mu_count) - 0.5 * s * math.log(field.disc_abs)
    return cmath.exp(log_value)


def zeta_normalized(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> TwoVarZetaValue:
    s = complex(s)
    w = complex(w)
    inner = zeta_over_w(field, params, s, w)
    factor = _normalization(field, s)
    return TwoVarZetaValue(factor * inner.value, abs(factor) * inner.est_error, s, w)


def L_H1(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> TwoVarZetaValue:
    """``(s/2pi) ((s-w)/2pi) zeta(X, s, w)``; finite at ``s = 0`` and ``s = w``."""
    s = complex(s)
    w = complex(w)
    pair, error = _J_pair(field, params, s, w)
    product = s * (s - w)
    factor = _normalization(field, s) / (4.0 * math.pi**2)
    value = factor * (product * pair + field.hR)
    return TwoVarZetaValue(value, abs(factor) * abs(product) * error, s, w)


def zeta_Xk_direct(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> TwoVarZetaValue:
    """``zeta_X`` from the defining integral over the whole Arakelov Picard group.

    Valid for ``Re s > max(Re w, 0)`` and for ``Re w < Re s < 0``; the part
    above ``t = sqrt(d)`` uses ``k0(D + D_t) = (t / sqrt(d)) k0(kappa - D - D_t)``.
    """
    s = complex(s)
    w = complex(w)
    upper_region = s.real > max(w.real, 0.0)
    lower_region = w.real < s.real < 0.0
    if not (upper_region or lower_region):
        raise DomainError("the direct integral converges only for Re s > max(Re w, 0) or Re w < Re s < 0")
    log_root = 0.5 * math.log(field.disc_abs)
    lower, lower_error = _scaled_J(field, params, s, w)
    upper, upper_error = _side_integral(field, params, "dual", w, (s - w) * log_root, w - s)
    analytic = -field.hR * (1.0 / s + 1.0 / (w - s))
    value = w * (lower + upper) + analytic
    return TwoVarZetaValue(value, abs(w) * (lower_error + upper_error), s, w)


def dedekind_zeta(field: NumberFieldData, s: complex) -> complex:
    """``zeta_k(s)`` for ``Q`` and quadratic fields as ``zeta(s) L(s, chi_D)``."""
    s = complex(s)
    discriminant = require_quadratic_character(field)
    if s.real < ORACLE_MIN_REAL:
        raise DomainError(f"the Dedekind zeta oracle needs Re s >= {ORACLE_MIN_REAL}")
    with mpmath.workdps(30):
        z = mpmath.mpc(s)
        value = mpmath.zeta(z)
        if discriminant != 1:
            modulus = abs(discriminant)
            series = mpmath.fsum(
                kronecker_symbol(discriminant, a) * mpmath.zeta(z, mpmath.mpf(a) / modulus)
                for a in range(1, modulus + 1)
            )
            value *= mpmath.power(modulus, -z) * series
        return complex(value)


def dedekind_zeta_completed(field: NumberFieldData, s: complex) -> complex:
    s = complex(s)
    value = dedekind_zeta(field, s)
    return value * gamma_R(s) ** field.r1 * gamma_C(s) ** field.r2


def f_w_ratio(field: NumberFieldData, params: ZetaEvalParams, s: complex, w: complex) -> TwoVarZetaValue:
    """``zeta(X, s, w) |mu| / (2^(r1/2) A(s))``, which tends to 1 as ``Re s`` grows."""
    s = complex(s)
    w = complex(w)
    if s.real <= max(w.real, 0.0):
        raise DomainError("f_w is evaluated only for Re s > max(Re w, 0)")
    inner = zeta_over_w(field, params, s, w)
    scale = cmath.exp(-0.5 * s * math.log(field.disc_abs))
    a_value = A_factor(field, params.grid, s, cache=params.cache, band=params.band, threads=params.threads)
    if a_value == 0:
        raise NumericError(f"A(s) vanishes at s = {s}")
    ratio = scale * inner.value / a_value
    return TwoVarZetaValue(ratio, abs(scale) * inner.est_error / abs(a_value), s, w)
