"""Two-variable zeta functions of curves over finite fields.

A curve enters only through ``q``, the genus, the class number ``h`` and the
multiset of ``(deg D, h0(D))`` over divisor classes of degree ``0..2g-2``.
From these ``Z_X(T, u)`` is an exact rational function; ``u = q`` recovers
the classical zeta function ``Z_X(q^-s)``.
"""

from __future__ import annotations

import cmath
import itertools
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .models import DataError, InputError, InvariantViolation, PoleError
from .utils import dump_json_file, load_json_file
from .validation import validate_curve_data

LOGGER = logging.getLogger(__name__)

T, U = sympy.symbols("T u")
_X = sympy.Symbol("x")

POLE_GUARD = 1e-12
ORACLE_MAX_Q = 16
ORACLE_MAX_DEGREE = 12
ENUMERATION_LIMIT = 256


@dataclass(frozen=True, slots=True)
class ClassCount:
    degree: int
    h0: int
    count: int


@dataclass(frozen=True, slots=True)
class CurveData:
    q: int
    genus: int
    h: int
    classes: Tuple[ClassCount, ...] = ()
    label: str = ""

    def profile(self, degree: int) -> Counter:
        """``h0 -> number of classes`` in one degree."""
        counts: Counter = Counter()
        for entry in self.classes:
            if entry.degree == degree:
                counts[entry.h0] += entry.count
        return counts

    def __str__(self) -> str:
        return self.label or f"curve(q={self.q}, g={self.genus}, h={self.h})"


@dataclass(frozen=True, slots=True)
class BivariateRational:
    numerator: sympy.Poly
    denominator: sympy.Poly

    def __post_init__(self) -> None:
        if self.denominator.is_zero:
            raise DataError("rational function with zero denominator")

    def as_expr(self) -> sympy.Expr:
        return self.numerator.as_expr() / self.denominator.as_expr()

    def equals(self, other: "BivariateRational") -> bool:
        left = self.numerator * other.denominator
        right = other.numerator * self.denominator
        return (left - right).is_zero

    def evaluate(self, t_value: complex, u_value: complex) -> complex:
        denominator = _evaluate_poly(self.denominator, t_value, u_value)
        if abs(denominator) < POLE_GUARD:
            raise PoleError(complex(t_value), message=f"denominator vanishes at T={t_value}, u={u_value}")
        return _evaluate_poly(self.numerator, t_value, u_value) / denominator


@dataclass(frozen=True, slots=True)
class UnivariateRational:
    numerator: sympy.Poly
    denominator: sympy.Poly

    def as_expr(self) -> sympy.Expr:
        return self.numerator.as_expr() / self.denominator.as_expr()

    def taylor(self, count: int) -> List[sympy.Rational]:
        """First ``count`` power series coefficients at ``T = 0``."""
        num = [sympy.Rational(c) for c in reversed(self.numerator.all_coeffs())]
        den = [sympy.Rational(c) for c in reversed(self.denominator.all_coeffs())]
        if den[0] == 0:
            raise DataError("denominator vanishes at T = 0; no power series expansion")
        coefficients: List[sympy.Rational] = []
        for k in range(count):
            value = num[k] if k < len(num) else sympy.Rational(0)
            for j in range(1, min(k, len(den) - 1) + 1):
                value -= den[j] * coefficients[k - j]
            coefficients.append(value / den[0])
        return coefficients


def _evaluate_poly(poly: sympy.Poly, t_value: complex, u_value: complex) -> complex:
    gens = poly.gens
    total = 0j
    for monomial, coefficient in poly.terms():
        term = complex(float(coefficient))
        for gen, power in zip(gens, monomial):
            term *= (t_value if gen == T else u_value) ** power
        total += term
    return total


def _is_prime_power(q: int) -> bool:
    return q >= 2 and len(sympy.factorint(q)) == 1


# -- validation --------------------------------------------------------------


def validate_curve(curve: CurveData) -> CurveData:
    """Counts per degree, the degree-0 and canonical rules and the Riemann-Roch pairing."""
    g = curve.genus
    if not _is_prime_power(curve.q):
        raise InvariantViolation("prime-power", float(curve.q), f"q={curve.q} is not a prime power")
    if g < 0 or curve.h < 1:
        raise InvariantViolation("genus-h", 0.0, "genus must be >= 0 and h >= 1")
    if g == 0:
        if curve.h != 1 or curve.classes:
            raise InvariantViolation("genus-zero", 0.0, "genus 0 curves have h = 1 and no class data")
        return curve

    top = 2 * g - 2
    for entry in curve.classes:
        if not 0 <= entry.degree <= top:
            raise InvariantViolation("degree-range", float(entry.degree), f"degree {entry.degree} outside [0, {top}]")
        if entry.count < 1 or entry.h0 < 0:
            raise InvariantViolation("class-entry", 0.0, f"invalid class entry {entry}")
        if entry.h0 > entry.degree // 2 + 1:
            raise InvariantViolation(
                "clifford", float(entry.h0), f"h0={entry.h0} exceeds 1 + d/2 in degree {entry.degree}"
            )

    for degree in range(top + 1):
        profile = curve.profile(degree)
        total = sum(profile.values())
        if total != curve.h:
            raise InvariantViolation(
                "class-count", float(total - curve.h), f"degree {degree} has {total} classes, expected h={curve.h}"
            )
        partner = curve.profile(top - degree)
        shift = degree + 1 - g
        shifted = Counter({h0 - shift: count for h0, count in profile.items()})
        if shifted != partner:
            raise InvariantViolation(
                "riemann-roch",
                0.0,
                f"h0 profiles in degrees {degree} and {top - degree} violate h0(D) - h0(K-D) = d + 1 - g",
            )

    zero = curve.profile(0)
    if zero.get(1, 0) != 1 or any(h0 not in (0, 1) for h0 in zero):
        raise InvariantViolation("degree-zero", 0.0, "degree 0 needs exactly one class with h0 = 1, the rest 0")
    return curve


# -- constructors and files --------------------------------------------------


def make_p1(q: int) -> CurveData:
    return validate_curve(CurveData(q=q, genus=0, h=1, label=f"P1/F{q}"))


def make_elliptic(q: int, points: int) -> CurveData:
    """Elliptic curve with ``points`` rational points; ``h = points``."""
    if points < 1 or (points - q - 1) ** 2 > 4 * q:
        raise InputError(f"{points} points over F_{q} violates the Hasse bound |N - q - 1| <= 2 sqrt(q)")
    classes = [ClassCount(0, 1, 1)]
    if points > 1:
        classes.append(ClassCount(0, 0, points - 1))
    return validate_curve(CurveData(q=q, genus=1, h=points, classes=tuple(classes), label=f"E/F{q}#{points}"))


def random_curve_data(rng: np.random.Generator, genus: int, h: int, q: int) -> CurveData:
    """Class data consistent with Riemann-Roch (not necessarily coming from an actual curve)."""
    if genus == 0:
        if h != 1:
            raise InputError("genus 0 forces h = 1")
        return make_p1(q)
    top = 2 * genus - 2
    classes: List[ClassCount] = []

    def add(degree: int, profile: Dict[int, int]) -> None:
        classes.extend(ClassCount(degree, h0, count) for h0, count in sorted(profile.items()) if count)

    for degree in range(genus):
        if degree == 0:
            profile = {1: 1, 0: h - 1}
        else:
            choices = np.arange(0, degree // 2 + 2)
            split = rng.multinomial(h, np.full(choices.size, 1.0 / choices.size))
            profile = {int(h0): int(count) for h0, count in zip(choices, split)}
        partner_degree = top - degree
        shift = degree + 1 - genus
        if partner_degree == degree:
            # self-paired degree g-1: shift is 0, any profile pairs with itself
            add(degree, profile)
            continue
        add(degree, profile)
        add(partner_degree, {h0 - shift: count for h0, count in profile.items()})
    curve = CurveData(q=q, genus=genus, h=h, classes=tuple(classes), label=f"random(g={genus}, h={h}, q={q})")
    return validate_curve(curve)


def curve_from_dict(data: Dict[str, Any]) -> CurveData:
    report = validate_curve_data(data)
    if not report.is_valid:
        first = report.errors[0]
        raise InputError(f"{first.path}: {first.message} ({first.code})")
    classes = tuple(ClassCount(int(item["degree"]), int(item["h0"]), int(item["count"])) for item in data["classes"])
    curve = CurveData(
        q=int(data["q"]),
        genus=int(data["genus"]),
        h=int(data["h"]),
        classes=classes,
        label=str(data.get("label") or ""),
    )
    return validate_curve(curve)


def curve_to_dict(curve: CurveData) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "q": curve.q,
        "genus": curve.genus,
        "h": curve.h,
        "classes": [{"degree": c.degree, "h0": c.h0, "count": c.count} for c in curve.classes],
    }
    if curve.label:
        payload["label"] = curve.label
    return payload


def load_curve_file(path: Path) -> CurveData:
    try:
        data = load_json_file(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse curve file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"curve file {path} must contain a JSON object")
    return curve_from_dict(data)


def save_curve_file(curve: CurveData, path: Path) -> None:
    dump_json_file(path, curve_to_dict(curve))


def resolve_curve_spec(spec: str) -> CurveData:
    """``builtin:p1:<q>``, ``builtin:ell:<q>:<N>`` or ``file:<path>``."""
    text = spec.strip()
    parts = text.split(":")
    try:
        if text.startswith("builtin:p1:") and len(parts) == 3:
            return make_p1(int(parts[2]))
        if text.startswith("builtin:ell:") and len(parts) == 4:
            return make_elliptic(int(parts[2]), int(parts[3]))
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"invalid curve parameters in '{spec}'") from exc
    if text.startswith("file:"):
        return load_curve_file(Path(text[len("file:") :]).expanduser())
    raise InputError(f"unknown curve spec '{spec}' (expected builtin:p1:q, builtin:ell:q:N or file:path)")


# -- exact rational functions ------------------------------------------------


def _poly(expr: sympy.Expr) -> sympy.Poly:
    return sympy.Poly(sympy.expand(expr), T, U, domain="QQ")


@lru_cache(maxsize=64)
def zeta_two_var(curve: CurveData) -> BivariateRational:
    """``Z_X(T, u)`` from ``(u-1) Z = S + h u^(d0+1-g) T^d0/(1-uT) - h/(1-T)`` with ``d0 = max(0, 2g-1)``."""
    g = curve.genus
    d0 = max(0, 2 * g - 1)
    finite = sum((entry.count * U**entry.h0 * T**entry.degree for entry in curve.classes), sympy.Integer(0))
    denominator = (1 - T) * (1 - U * T)
    numerator = (
        finite * denominator
        + curve.h * U ** (d0 + 1 - g) * T**d0 * (1 - T)
        - curve.h * (1 - U * T)
    )
    quotient, remainder = sympy.div(_poly(numerator), _poly(U - 1))
    if not remainder.is_zero:
        raise DataError(f"{curve}: class data is inconsistent, (u - 1) does not divide the numerator")
    return BivariateRational(quotient, _poly(denominator))


def extract_P(zeta: BivariateRational, genus: int) -> List[sympy.Poly]:
    """Coefficients ``P_i(u)`` of ``P_X(T, u) = Z_X(T, u) (1 - T)(1 - uT)``."""
    product = zeta.numerator * _poly((1 - T) * (1 - U * T))
    quotient, remainder = sympy.div(product, zeta.denominator)
    if not remainder.is_zero:
        raise DataError("Z_X (1 - T)(1 - uT) is not a polynomial")
    degree_t = quotient.degree(T) if not quotient.is_zero else 0
    if degree_t > 2 * genus:
        raise DataError(f"P_X has T-degree {degree_t} > 2g = {2 * genus}")
    coefficients = []
    for i in range(2 * genus + 1):
        expr = sympy.expand(quotient.as_expr()).coeff(T, i)
        coefficients.append(sympy.Poly(expr, U, domain="QQ"))

    if coefficients[0].as_expr() != 1:
        raise DataError(f"P_0(u) = {coefficients[0].as_expr()}, expected 1")
    if sympy.expand(coefficients[-1].as_expr() - U**genus) != 0:
        raise DataError(f"P_2g(u) = {coefficients[-1].as_expr()}, expected u^{genus}")
    for i, coefficient in enumerate(coefficients):
        if not coefficient.is_zero and coefficient.degree() > 1 + i / 2:
            raise DataError(f"deg P_{i}(u) = {coefficient.degree()} exceeds 1 + {i}/2")
    return coefficients


def check_functional_equation(zeta: BivariateRational, genus: int) -> Tuple[bool, Optional[int]]:
    """``P_{2g-i}(u) = u^(g-i) P_i(u)``; returns the first violated index."""
    coefficients = [poly.as_expr() for poly in extract_P(zeta, genus)]
    top = 2 * genus
    for i in range(top + 1):
        if i <= genus:
            difference = coefficients[top - i] - U ** (genus - i) * coefficients[i]
        else:
            difference = U ** (i - genus) * coefficients[top - i] - coefficients[i]
        if sympy.expand(difference) != 0:
            return False, i
    return True, None


def functional_equation_residual(zeta: BivariateRational, genus: int) -> sympy.Expr:
    """``Z(T, u) - u^(g-1) T^(2g-2) Z(1/(Tu), u)``, reduced; zero for consistent data."""
    expr = zeta.as_expr()
    mirrored = expr.subs(T, 1 / (T * U))
    return sympy.cancel(sympy.together(expr - U ** (genus - 1) * T ** (2 * genus - 2) * mirrored))


def specialize_u(zeta: BivariateRational, value: Any) -> UnivariateRational:
    number = sympy.nsimplify(value)
    numerator = sympy.Poly(zeta.numerator.as_expr().subs(U, number), T, domain="QQ")
    denominator = sympy.Poly(zeta.denominator.as_expr().subs(U, number), T, domain="QQ")
    if denominator.is_zero:
        raise DataError(f"denominator vanishes identically at u = {value}")
    return UnivariateRational(numerator, denominator)


# -- numerical evaluation ----------------------------------------------------


def p_coefficients(curve: CurveData, u_value: complex) -> List[complex]:
    """``P_i(u)`` evaluated at ``u_value``."""
    return [_evaluate_poly(poly, 0j, u_value) for poly in _cached_P(curve)]


@lru_cache(maxsize=64)
def _cached_P(curve: CurveData) -> Tuple[sympy.Poly, ...]:
    polys = extract_P(zeta_two_var(curve), curve.genus)
    return tuple(sympy.Poly(poly.as_expr(), T, U, domain="QQ") for poly in polys)


def evaluate_two_var(curve: CurveData, t_value: complex, u_value: complex, which: str = "Z") -> complex:
    if which == "Z":
        return zeta_two_var(curve).evaluate(t_value, u_value)
    if which == "P":
        return sum(
            coefficient * t_value**i for i, coefficient in enumerate(p_coefficients(curve, u_value))
        )
    raise InputError(f"unknown function '{which}' (expected Z or P)")


def _q_power(curve: CurveData, exponent: complex) -> complex:
    return cmath.exp(complex(exponent) * math.log(curve.q))


def zeta_GS_ff(curve: CurveData, s: complex, t: complex) -> complex:
    """``(q^(s+t) - 1) q^(t(g-1)) Z_X(q^-t, q^(s+t))``."""
    s = complex(s)
    t = complex(t)
    u_value = _q_power(curve, s + t)
    factor = (u_value - 1.0) * _q_power(curve, t * (curve.genus - 1))
    return factor * evaluate_two_var(curve, _q_power(curve, -t), u_value)


def zeta_sw_ff(curve: CurveData, s: complex, w: complex) -> complex:
    """``(q^w - 1) q^(-s(1-g)) Z_X(q^-s, q^w)``."""
    s = complex(s)
    w = complex(w)
    u_value = _q_power(curve, w)
    factor = (u_value - 1.0) * _q_power(curve, -s * (1 - curve.genus))
    return factor * evaluate_two_var(curve, _q_power(curve, -s), u_value)


def zeta_classical(curve: CurveData, s: complex) -> complex:
    """``Z_X(q^-s)``, the Hasse-Weil zeta function."""
    return evaluate_two_var(curve, _q_power(curve, -complex(s)), complex(curve.q))


# -- P^1 oracle --------------------------------------------------------------


def _irreducible_count(q: int, degree: int) -> int:
    total = sum(sympy.mobius(e) * q ** (degree // e) for e in sympy.divisors(degree))
    return int(total) // degree


def _divisor_key(q: int, coefficients: Tuple[int, ...]) -> Any:
    """Closed points with multiplicities of the monic polynomial ``coefficients`` (prime ``q`` only)."""
    finite = len(coefficients) - 1
    if finite == 0 or not sympy.isprime(q):
        return coefficients
    _, factors = sympy.Poly(list(coefficients), _X, modulus=q).factor_list()
    if sum(factor.degree() * multiplicity for factor, multiplicity in factors) != finite:
        raise DataError(f"factorization of {coefficients} over F_{q} lost degree")
    return frozenset((tuple(int(c) % q for c in factor.all_coeffs()), multiplicity) for factor, multiplicity in factors)


def _enumerated_divisor_count(q: int, degree: int) -> Optional[int]:
    """Distinct effective divisors ``k * infinity + div(f)`` over all ``k`` and monic ``f`` of degree ``degree - k``.

    Returns ``None`` above ``ENUMERATION_LIMIT`` monic polynomials.
    """
    if q**degree > ENUMERATION_LIMIT:
        return None
    divisors = set()
    for at_infinity in range(degree + 1):
        for tail in itertools.product(range(q), repeat=degree - at_infinity):
            divisors.add((at_infinity, _divisor_key(q, (1, *tail))))
    return len(divisors)


def p1_effective_divisor_oracle(q: int, d_max: int) -> List[int]:
    """Effective divisors of P^1 over F_q per degree ``0..d_max``, cross-checked three ways.

    The closed form ``(q^(d+1) - 1)/(q - 1)`` is compared with the Euler
    product over closed points and, in low degree, with an explicit
    enumeration of divisors.
    """
    if not _is_prime_power(q) or q > ORACLE_MAX_Q:
        raise InputError(f"oracle needs a prime power q <= {ORACLE_MAX_Q}, got {q}")
    if not 0 <= d_max <= ORACLE_MAX_DEGREE:
        raise InputError(f"oracle needs 0 <= d_max <= {ORACLE_MAX_DEGREE}")

    closed = [(q ** (d + 1) - 1) // (q - 1) for d in range(d_max + 1)]

    series = [1] + [0] * d_max
    points = [(1, 1)] + [(degree, _irreducible_count(q, degree)) for degree in range(1, d_max + 1)]
    for degree, count in points:
        for _ in range(count):
            for index in range(degree, d_max + 1):
                series[index] += series[index - degree]

    enumerated: Dict[int, int] = {}
    for degree in range(d_max + 1):
        count = _enumerated_divisor_count(q, degree)
        if count is None:
            break
        enumerated[degree] = count

    if closed != series or any(closed[degree] != count for degree, count in enumerated.items()):
        raise DataError(f"P^1 divisor counts disagree over F_{q}: {closed} / {series} / {enumerated}")
    LOGGER.debug(
        "P1 oracle | q: %s | Degrees: %s | Enumerated up to: %s | Counts: %s",
        q,
        d_max,
        max(enumerated),
        closed,
    )
    return closed


def curve_summary(curve: CurveData) -> Dict[str, Any]:
    """Exact ``P_i(u)`` and the classical numerator, rendered as strings."""
    zeta = zeta_two_var(curve)
    polys = extract_P(zeta, curve.genus)
    classical = specialize_u(zeta, curve.q)
    return {
        "curve": str(curve),
        "P": [str(poly.as_expr()) for poly in polys],
        "classical_numerator": str(sympy.factor(classical.numerator.as_expr())),
        "classical_denominator": str(sympy.factor(classical.denominator.as_expr())),
    }


def sample_points(rng: np.random.Generator, count: int, spread: float = 2.0) -> Sequence[complex]:
    real = rng.uniform(-spread, spread, size=count)
    imag = rng.uniform(-spread, spread, size=count)
    return [complex(a, b) for a, b in zip(real, imag)]
