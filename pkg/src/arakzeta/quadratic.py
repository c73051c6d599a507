"""Arithmetic of quadratic fields through binary quadratic forms.

Forms are written ``(a, b, c)`` for ``a x^2 + b x y + c y^2`` with
discriminant ``b^2 - 4ac`` equal to a fundamental discriminant.  The ideal
attached to a form with ``a > 0`` is the lattice ``[a, (-b + sqrt(D)) / 2]``
of norm ``a``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Set, Tuple

from sympy.ntheory import factorint

from .models import InputError, NumericError

LOGGER = logging.getLogger(__name__)

_UNIT_EXPANSION_CAP = 100_000
_UNIT_SEARCH_CAP = 1_000_000


@dataclass(frozen=True, slots=True)
class BinaryQuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def negated(self) -> "BinaryQuadraticForm":
        return BinaryQuadraticForm(-self.a, self.b, -self.c)

    def conjugate(self) -> "BinaryQuadraticForm":
        return BinaryQuadraticForm(self.a, -self.b, self.c)

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def __repr__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


@dataclass(frozen=True, slots=True)
class FundamentalUnit:
    """``x + y * omega`` with ``omega`` the standard generator of the ring of integers."""

    x: int
    y: int
    norm: int
    log_value: float


def is_squarefree(m: int) -> bool:
    if m == 0:
        return False
    return all(exponent == 1 for exponent in factorint(abs(m)).values())


def fundamental_discriminant(m: int) -> int:
    if m in (0, 1) or not is_squarefree(m):
        raise InputError(f"m={m} must be a squarefree integer different from 0 and 1")
    return m if m % 4 == 1 else 4 * m


def omega_value(m: int) -> float:
    root = math.sqrt(abs(m))
    if m % 4 == 1:
        return (1.0 + root) / 2.0
    return root


def principal_form(discriminant: int) -> BinaryQuadraticForm:
    b = discriminant % 2
    return BinaryQuadraticForm(1, b, (b * b - discriminant) // 4)


def kronecker_symbol(d: int, n: int) -> int:
    """Kronecker symbol ``(d / n)``."""
    if n == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if d % 2 == 0:
            return 0
        if twos % 2 == 1 and d % 8 in (3, 5):
            result = -result
    # Jacobi symbol for the odd part.
    a = d % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# -- definite forms ---------------------------------------------------------


def reduced_definite_forms(discriminant: int) -> List[BinaryQuadraticForm]:
    """All reduced primitive positive definite forms, sorted by ``(a, b)``."""
    if discriminant >= 0:
        raise InputError("definite forms require a negative discriminant")
    forms: List[BinaryQuadraticForm] = []
    a = 1
    while 3 * a * a <= -discriminant:
        for b in range(-a + 1, a + 1):
            if (b - discriminant) % 2:
                continue
            numerator = b * b - discriminant
            if numerator % (4 * a):
                continue
            c = numerator // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            form = BinaryQuadraticForm(a, b, c)
            if form.is_primitive():
                forms.append(form)
        a += 1
    forms.sort(key=lambda f: (f.a, abs(f.b), -f.b))
    return forms


# -- indefinite forms -------------------------------------------------------


def _is_reduced_indefinite(form: BinaryQuadraticForm, discriminant: int) -> bool:
    b = form.b
    if b <= 0 or b * b >= discriminant:
        return False
    lower = 2 * abs(form.a) - b
    upper = 2 * abs(form.a) + b
    return (lower < 0 or lower * lower < discriminant) and discriminant < upper * upper


def _normalize_indefinite(a: int, b: int, discriminant: int) -> BinaryQuadraticForm:
    abs_a = abs(a)
    modulus = 2 * abs_a
    root = math.isqrt(discriminant)
    if abs_a * abs_a < discriminant:
        shifted = b + modulus * ((root - b) // modulus)
    else:
        shifted = b % modulus
        if shifted > abs_a:
            shifted -= modulus
    c = (shifted * shifted - discriminant) // (4 * a)
    return BinaryQuadraticForm(a, shifted, c)


def rho(form: BinaryQuadraticForm) -> BinaryQuadraticForm:
    """One reduction step ``(a, b, c) -> normalize(c, -b, a)``."""
    return _normalize_indefinite(form.c, -form.b, form.discriminant)


def reduce_indefinite(form: BinaryQuadraticForm) -> BinaryQuadraticForm:
    discriminant = form.discriminant
    current = _normalize_indefinite(form.a, form.b, discriminant)
    for _ in range(_UNIT_EXPANSION_CAP):
        if _is_reduced_indefinite(current, discriminant):
            return current
        current = rho(current)
    raise NumericError(f"reduction of {form} did not terminate")


def reduced_indefinite_forms(discriminant: int) -> List[BinaryQuadraticForm]:
    if discriminant <= 0:
        raise InputError("indefinite forms require a positive discriminant")
    forms: List[BinaryQuadraticForm] = []
    b = discriminant % 2 or 2
    while b * b < discriminant:
        product = (discriminant - b * b) // 4
        for divisor in range(1, product + 1):
            if product % divisor:
                continue
            for a in (divisor, -divisor):
                form = BinaryQuadraticForm(a, b, -product // a)
                if _is_reduced_indefinite(form, discriminant) and form.is_primitive():
                    forms.append(form)
        b += 2
    return forms


def form_cycle(form: BinaryQuadraticForm) -> List[BinaryQuadraticForm]:
    cycle = [form]
    current = rho(form)
    while current != form:
        cycle.append(current)
        if len(cycle) > _UNIT_EXPANSION_CAP:
            raise NumericError(f"cycle of {form} did not close")
        current = rho(current)
    return cycle


def _representative(group: Set[BinaryQuadraticForm]) -> BinaryQuadraticForm:
    positive = [form for form in group if form.a > 0]
    return min(positive, key=lambda f: (f.a, f.b))


def indefinite_class_representatives(discriminant: int) -> List[BinaryQuadraticForm]:
    """One form with ``a > 0`` per wide ideal class, principal class first.

    Cycles of reduced forms are the narrow classes; a cycle and the cycle of
    the negated forms describe the same wide class.
    """
    remaining = set(reduced_indefinite_forms(discriminant))
    groups: List[Set[BinaryQuadraticForm]] = []
    while remaining:
        seed = min(remaining, key=lambda f: (abs(f.a), f.b, f.a))
        group = set(form_cycle(seed))
        group.update(form_cycle(seed.negated()))
        remaining -= group
        groups.append(group)
    principal = reduce_indefinite(principal_form(discriminant))
    others = [group for group in groups if principal not in group]
    representatives = [principal_form(discriminant)]
    representatives.extend(sorted((_representative(group) for group in others), key=lambda f: (f.a, f.b)))
    LOGGER.debug(
        "Indefinite classes | Discriminant: %s | Reduced forms: %s | Classes: %s",
        discriminant,
        sum(len(group) for group in groups),
        len(groups),
    )
    return representatives


def class_representatives(discriminant: int) -> List[BinaryQuadraticForm]:
    if discriminant < 0:
        return reduced_definite_forms(discriminant)
    return indefinite_class_representatives(discriminant)


def class_number(discriminant: int) -> int:
    return len(class_representatives(discriminant))


# -- units --------------------------------------------------------------------


def _unit_norm(m: int, x: int, y: int) -> int:
    if m % 4 == 1:
        return x * x + x * y - ((m - 1) // 4) * y * y
    return x * x - m * y * y


def fundamental_unit(m: int) -> FundamentalUnit:
    """Fundamental unit ``> 1`` of the real quadratic field ``Q(sqrt(m))``.

    The continued fraction of ``-conj(omega)`` is expanded with exact integer
    recurrences; the first convergent ``p/q`` with ``N(p + q*omega) = +-1``
    gives the unit.
    """
    if m <= 1:
        raise InputError("fundamental units exist only for real quadratic fields")
    fundamental_discriminant(m)
    root = math.isqrt(m)
    p_big, q_big = (-1, 2) if m % 4 == 1 else (0, 1)
    p_prev, p_curr = 0, 1
    q_prev, q_curr = 1, 0
    for _ in range(_UNIT_EXPANSION_CAP):
        partial = (p_big + root) // q_big
        p_prev, p_curr = p_curr, partial * p_curr + p_prev
        q_prev, q_curr = q_curr, partial * q_curr + q_prev
        norm = _unit_norm(m, p_curr, q_curr)
        if norm in (1, -1):
            value = p_curr + q_curr * omega_value(m)
            return FundamentalUnit(x=p_curr, y=q_curr, norm=norm, log_value=math.log(value))
        p_big = partial * q_big - p_big
        q_big = (m - p_big * p_big) // q_big
    raise NumericError(f"no unit found for m={m} within the expansion cap")


def roots_of_unity_count(m: int) -> int:
    if m == -1:
        return 4
    if m == -3:
        return 6
    return 2


# -- analytic oracle ----------------------------------------------------------


def unit_by_search(discriminant: int) -> float:
    """``log((x + y sqrt(D)) / 2)`` for the least ``y > 0`` with ``x^2 - D y^2 = -4`` or ``4``."""
    if discriminant <= 1:
        raise InputError("unit search needs a positive discriminant")
    root = math.sqrt(discriminant)
    for y in range(1, _UNIT_SEARCH_CAP):
        # norm -4 first: for D = 5 both signs occur at y = 1
        for target in (-4, 4):
            square = discriminant * y * y + target
            x = math.isqrt(square)
            if x > 0 and x * x == square:
                return math.log((x + y * root) / 2.0)
    raise NumericError(f"no unit of discriminant {discriminant} with y below {_UNIT_SEARCH_CAP}")


def analytic_class_data(m: int) -> Tuple[int, float]:
    """``(h, R)`` of ``Q(sqrt(m))`` from the class number formula with finite character sums.

    ``h = -(w / 2|D|) sum chi(a) a`` for imaginary fields and
    ``h R = -(1/2) sum chi(a) log sin(pi a / D)`` for real ones, ``a`` running
    over ``1..|D|-1``.
    """
    discriminant = fundamental_discriminant(m)
    modulus = abs(discriminant)
    characters = [(a, kronecker_symbol(discriminant, a)) for a in range(1, modulus)]
    if discriminant < 0:
        total = -roots_of_unity_count(m) * sum(chi * a for a, chi in characters)
        return round(total / (2 * modulus)), 1.0
    class_times_regulator = -0.5 * math.fsum(
        chi * math.log(math.sin(math.pi * a / modulus)) for a, chi in characters if chi
    )
    regulator = unit_by_search(discriminant)
    return round(class_times_regulator / regulator), regulator
