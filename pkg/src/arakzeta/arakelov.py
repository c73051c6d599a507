"""Arakelov divisors as metrized ideal lattices.

A divisor is an ideal class representative together with real components
``x_v``; its lattice carries the quadratic form

    ||f||^2 = sum_real |f|_v^2 exp(-2 x_v) + 2 sum_complex |f|_v^2 exp(-x_v).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .fielddata import NumberFieldData, place_weights, trace_matrix
from .models import CapabilityError, InputError, NumericError

LOGGER = logging.getLogger(__name__)

ENUMERATION_SLACK = 1e-12
THETA_CAP_DOUBLINGS = 10
_EXACT_LIMIT = 2**52

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True, slots=True)
class ArakelovDivisor:
    class_index: int
    x: Tuple[float, ...]

    def __post_init__(self) -> None:
        if self.class_index < 0:
            raise InputError("class_index must be non-negative")
        if not all(math.isfinite(value) for value in self.x):
            raise InputError("divisor components must be finite")

    @classmethod
    def zero(cls, field: NumberFieldData, class_index: int = 0) -> "ArakelovDivisor":
        return cls(class_index, tuple(0.0 for _ in range(field.place_count)))

    def translate(self, vector: Sequence[float]) -> "ArakelovDivisor":
        return ArakelovDivisor(self.class_index, tuple(a + float(b) for a, b in zip(self.x, vector)))


@dataclass(frozen=True, slots=True)
class LatticeInvariants:
    a: float
    b: float
    nu: int


def _check_divisor(field: NumberFieldData, divisor: ArakelovDivisor) -> None:
    if divisor.class_index >= field.class_number_h:
        raise InputError(f"class index {divisor.class_index} out of range for h={field.class_number_h}")
    if len(divisor.x) != field.place_count:
        raise InputError(f"divisor needs {field.place_count} infinite components, got {len(divisor.x)}")


def _check_tolerance(tol: float, *, name: str = "tol") -> None:
    if not 0 < tol <= 1e-3:
        raise InputError(f"'{name}' must lie in (0, 1e-3]")


def coordinate_weights(field: NumberFieldData, x: Sequence[float]) -> np.ndarray:
    """Diagonal metric on embedding coordinates for the components ``x``."""
    values = np.asarray(x, dtype=float)
    real = np.exp(-2.0 * values[: field.r1])
    complex_part = np.repeat(2.0 * np.exp(-values[field.r1 :]), 2)
    return np.concatenate([real, complex_part])


def gram_from_basis(field: NumberFieldData, basis: np.ndarray, x: Sequence[float]) -> np.ndarray:
    gram = basis @ np.diag(coordinate_weights(field, x)) @ basis.T
    return 0.5 * (gram + gram.T)


def lattice_gram(field: NumberFieldData, divisor: ArakelovDivisor) -> np.ndarray:
    _check_divisor(field, divisor)
    basis = field.ideal_classes[divisor.class_index].matrix
    return gram_from_basis(field, basis, divisor.x)


def arakelov_norm(field: NumberFieldData, divisor: ArakelovDivisor) -> float:
    _check_divisor(field, divisor)
    return math.exp(math.fsum(divisor.x)) / field.ideal_classes[divisor.class_index].norm


def divisor_t_components(field: NumberFieldData, t: float) -> np.ndarray:
    """Components of ``D_t``: ``x_v = e_v log(t) / n``."""
    if t <= 0:
        raise InputError("t must be positive")
    return place_weights(field) * math.log(t) / field.degree_n


def divisor_t(field: NumberFieldData, t: float) -> ArakelovDivisor:
    return ArakelovDivisor(0, tuple(float(value) for value in divisor_t_components(field, t)))


def add_divisor_t(field: NumberFieldData, divisor: ArakelovDivisor, t: float) -> ArakelovDivisor:
    return divisor.translate(divisor_t_components(field, t))


# -- enumeration -------------------------------------------------------------


def _cholesky_upper(gram: np.ndarray) -> np.ndarray:
    matrix = np.asarray(gram, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NumericError("Gram matrix must be square")
    if not np.allclose(matrix, matrix.T, rtol=1e-12, atol=1e-12 * float(np.max(np.abs(matrix)))):
        raise NumericError("Gram matrix is not symmetric")
    try:
        lower = np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Gram matrix is not positive definite: {exc}") from exc
    return lower.T


def _is_integral(gram: np.ndarray) -> bool:
    rounded = np.rint(gram)
    return bool(np.all(np.abs(gram - rounded) <= 1e-12 * np.maximum(1.0, np.abs(gram))))


def _quadratic_values(gram: np.ndarray, coords: np.ndarray) -> np.ndarray:
    if coords.size == 0:
        return np.zeros(0)
    if _is_integral(gram):
        exact = np.rint(gram).astype(np.int64)
        largest = int(np.max(np.abs(coords))) if coords.size else 0
        if int(np.max(np.abs(exact))) * largest * largest * gram.shape[0] ** 2 < _EXACT_LIMIT:
            values = np.einsum("ki,ij,kj->k", coords, exact, coords)
            return values.astype(float)
    return np.einsum("ki,ij,kj->k", coords.astype(float), gram, coords.astype(float))


def _enumerate_arrays(gram: np.ndarray, bound: float) -> Tuple[np.ndarray, np.ndarray]:
    """Coordinates and values of every nonzero ``c`` with ``c^T G c <= bound``."""
    if bound <= 0:
        raise InputError("enumeration bound must be positive")
    upper = _cholesky_upper(gram)
    dim = upper.shape[0]
    diag = np.diag(upper)
    q = diag * diag
    mu = upper / diag[:, None]
    budget = bound * (1.0 + ENUMERATION_SLACK) + ENUMERATION_SLACK
    blocks: List[np.ndarray] = []
    x = np.zeros(dim, dtype=np.int64)

    def search(level: int, remaining: float) -> None:
        center = -float(mu[level, level + 1 :] @ x[level + 1 :]) if level + 1 < dim else 0.0
        radius = math.sqrt(max(remaining, 0.0) / q[level])
        low = math.ceil(center - radius - ENUMERATION_SLACK)
        high = math.floor(center + radius + ENUMERATION_SLACK)
        if high < low:
            return
        if level == 0:
            block = np.empty((high - low + 1, dim), dtype=np.int64)
            block[:, 0] = np.arange(low, high + 1, dtype=np.int64)
            block[:, 1:] = x[1:]
            blocks.append(block)
            return
        for value in range(low, high + 1):
            x[level] = value
            search(level - 1, remaining - q[level] * (value - center) ** 2)
        x[level] = 0

    search(dim - 1, budget)
    if not blocks:
        return np.zeros((0, dim), dtype=np.int64), np.zeros(0)
    coords = np.concatenate(blocks)
    coords = coords[np.any(coords != 0, axis=1)]
    values = _quadratic_values(np.asarray(gram, dtype=float), coords)
    keep = values <= bound * (1.0 + ENUMERATION_SLACK)
    return coords[keep], values[keep]


def enumerate_vectors(gram: np.ndarray, bound: float) -> List[Tuple[Tuple[int, ...], float]]:
    coords, values = _enumerate_arrays(np.asarray(gram, dtype=float), bound)
    order = np.lexsort(tuple(coords[:, i] for i in reversed(range(coords.shape[1]))) + (values,))
    return [(tuple(int(c) for c in coords[i]), float(values[i])) for i in order]


def lattice_minimum(gram: np.ndarray) -> float:
    matrix = np.asarray(gram, dtype=float)
    _, values = _enumerate_arrays(matrix, float(np.min(np.diag(matrix))))
    return float(np.min(values))


def lattice_invariants(gram: np.ndarray, band: float = 1e-9) -> LatticeInvariants:
    matrix = np.asarray(gram, dtype=float)
    a = lattice_minimum(matrix)
    _, values = _enumerate_arrays(matrix, 4.0 * a * (1.0 + band))
    threshold = a * (1.0 + band)
    nu = int(np.count_nonzero(values <= threshold))
    above = values[values > threshold]
    if above.size == 0:
        raise NumericError(f"no second value found below 4a = {4.0 * a:.12g}")
    return LatticeInvariants(a=a, b=float(np.min(above)), nu=nu)


def invariants_abnu(field: NumberFieldData, divisor: ArakelovDivisor, band: float = 1e-9) -> LatticeInvariants:
    return lattice_invariants(lattice_gram(field, divisor), band)


# -- theta series ------------------------------------------------------------


@dataclass(slots=True)
class ThetaProfile:
    """Truncated norm values of one lattice, valid for every scale >= ``min_scale``.

    ``excess(scale)`` is ``sum_{f != 0} exp(-pi * scale * ||f||^2)``.
    """

    values: np.ndarray
    minimum: float
    min_scale: float
    bound: float
    tol: float
    relative: bool = False

    @classmethod
    def build(
        cls,
        gram: np.ndarray,
        *,
        tol: float,
        min_scale: float = 1.0,
        relative: bool = False,
    ) -> "ThetaProfile":
        matrix = np.asarray(gram, dtype=float)
        a = lattice_minimum(matrix)
        log_tol = -math.log(tol / 4.0)
        if relative:
            log_tol += math.pi * a * min_scale
        start = max(4.0 * a, log_tol / (math.pi * min_scale))
        shell_bound = start
        while True:
            _, values = _enumerate_arrays(matrix, 2.0 * shell_bound)
            terms = np.exp(-math.pi * min_scale * values)
            shell = float(np.sum(terms[values > shell_bound]))
            reference = float(np.sum(terms)) if relative else 1.0
            if shell < 0.5 * tol * reference:
                break
            shell_bound *= 2.0
            if shell_bound > 2**THETA_CAP_DOUBLINGS * start:
                raise NumericError(
                    f"theta truncation did not converge below bound {shell_bound:.6g} (tol {tol:g})"
                )
        LOGGER.debug(
            "Theta profile | Minimum: %.12g | Scale: %.6g | Bound: %.6g | Vectors: %s",
            a,
            min_scale,
            2.0 * shell_bound,
            values.size,
        )
        return cls(
            values=np.sort(values),
            minimum=a,
            min_scale=min_scale,
            bound=2.0 * shell_bound,
            tol=tol,
            relative=relative,
        )

    def excess(self, scale: ArrayLike) -> ArrayLike:
        scales = np.asarray(scale, dtype=float)
        if np.any(scales < self.min_scale * (1.0 - 1e-12)):
            raise NumericError(f"scale below the profile minimum {self.min_scale:.6g}")
        if scales.ndim == 0:
            return float(np.sum(np.exp(-math.pi * float(scales) * self.values)))
        return np.exp(-math.pi * np.outer(scales, self.values)).sum(axis=1)

    def log_theta(self, scale: ArrayLike) -> ArrayLike:
        return np.log1p(self.excess(scale))

    def theta(self, scale: ArrayLike) -> ArrayLike:
        return 1.0 + self.excess(scale)


def theta_from_gram(gram: np.ndarray, tol: float) -> float:
    return float(ThetaProfile.build(gram, tol=tol).theta(1.0))


def theta_k0(field: NumberFieldData, divisor: ArakelovDivisor, tol: float = 1e-10) -> float:
    _check_tolerance(tol)
    return theta_from_gram(lattice_gram(field, divisor), tol)


def theta_doubling_gap(field: NumberFieldData, divisor: ArakelovDivisor, tol: float = 1e-10) -> float:
    """Change in ``k0(D)`` when the truncation bound of its profile is doubled."""
    _check_tolerance(tol)
    gram = lattice_gram(field, divisor)
    profile = ThetaProfile.build(gram, tol=tol)
    _, values = _enumerate_arrays(gram, 2.0 * profile.bound)
    doubled = 1.0 + math.fsum(np.exp(-math.pi * values))
    return abs(doubled - float(profile.theta(1.0)))


def dual_basis(field: NumberFieldData, class_index: int) -> np.ndarray:
    """Embedding rows of the trace-dual basis, a basis of ``d^-1 a^-1``."""
    basis = field.ideal_classes[class_index].matrix
    return np.linalg.solve(trace_matrix(field, class_index), basis)


def kappa_minus_gram(
    field: NumberFieldData,
    divisor: ArakelovDivisor,
    route: str = "auto",
) -> np.ndarray:
    """Gram matrix of ``kappa - D``."""
    _check_divisor(field, divisor)
    if route not in {"auto", "pairing", "trace_dual"}:
        raise InputError(f"unknown k1 route '{route}'")
    negated = -np.asarray(divisor.x, dtype=float)
    entry = field.kappa_entry(divisor.class_index)
    if route == "pairing" or (route == "auto" and entry is not None):
        if entry is None:
            raise CapabilityError(
                f"{field}: no kappa pairing stored for ideal class {divisor.class_index}; "
                "add a kappa_classes entry for it"
            )
        basis = field.ideal_classes[entry.target_class].matrix
        return gram_from_basis(field, basis, negated + np.asarray(entry.shift))
    return gram_from_basis(field, dual_basis(field, divisor.class_index), negated)


def theta_k1(
    field: NumberFieldData,
    divisor: ArakelovDivisor,
    tol: float = 1e-10,
    route: str = "auto",
) -> float:
    _check_tolerance(tol)
    return theta_from_gram(kappa_minus_gram(field, divisor, route), tol)


def riemann_roch_residual(
    field: NumberFieldData,
    divisor: ArakelovDivisor,
    tol: float = 1e-10,
    route: str = "auto",
) -> float:
    k0 = theta_k0(field, divisor, tol)
    k1 = theta_k1(field, divisor, tol, route)
    return k0 / k1 - arakelov_norm(field, divisor) / math.sqrt(field.disc_abs)


def theta_decay_constant(
    field: NumberFieldData,
    divisor: ArakelovDivisor,
    t_values: Iterable[float],
    tol: float = 1e-10,
) -> float:
    """Smallest ``c`` with ``|k0(D + D_t) - 1| <= c exp(-pi n t^(-2/n))`` on the sample."""
    n = field.degree_n
    samples = sorted(float(t) for t in t_values)
    if not samples:
        raise InputError("t_values must not be empty")
    gram = lattice_gram(field, divisor)
    profile = ThetaProfile.build(gram, tol=tol, min_scale=samples[-1] ** (-2.0 / n), relative=True)
    scales = np.array([t ** (-2.0 / n) for t in samples])
    excess = np.atleast_1d(profile.excess(scales))
    log_ratio = np.log(np.maximum(excess, np.finfo(float).tiny)) + math.pi * n * scales
    return float(math.exp(np.max(log_ratio)))


def sample_divisors(
    field: NumberFieldData,
    count: int,
    rng: np.random.Generator,
    *,
    spread: float = 1.0,
    class_index: Optional[int] = None,
) -> List[ArakelovDivisor]:
    """Random divisors with components drawn uniformly from ``[-spread, spread]``."""
    divisors: List[ArakelovDivisor] = []
    for _ in range(count):
        index = int(rng.integers(field.class_number_h)) if class_index is None else class_index
        x = rng.uniform(-spread, spread, size=field.place_count)
        divisors.append(ArakelovDivisor(index, tuple(float(value) for value in x)))
    return divisors
