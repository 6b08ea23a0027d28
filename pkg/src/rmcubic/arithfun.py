"""
Arithmetic functions used by the closed-form enumerators.

Kronecker symbols, class numbers of binary quadratic forms, Hurwitz class
numbers, Ramanujan's tau function and eta-product coefficients. Values
are exact: integers or ``fractions.Fraction``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Mapping

import structlog
from sympy import factorint, legendre_symbol

from rmcubic.exceptions import InvalidArgumentError, InvalidDiscriminantError

logger = structlog.get_logger(__name__)

TAU_BOUND = 10_000

Form = tuple[int, int, int]


def kronecker(a: int, n: int) -> int:
    """
    Kronecker symbol (a/n) for n >= 1.

    Raises:
        InvalidArgumentError: If n < 1
    """
    if n < 1:
        raise InvalidArgumentError(f"kronecker symbol needs n >= 1, got {n}")
    result = 1
    for p, e in factorint(n).items():
        if p == 2:
            if a % 2 == 0:
                symbol = 0
            elif a % 8 in (1, 7):
                symbol = 1
            else:
                symbol = -1
        else:
            symbol = int(legendre_symbol(a % p, p)) if a % p else 0
        result *= symbol**e
    return result


def _check_discriminant(d: int) -> None:
    if d >= 0 or d % 4 not in (0, 1):
        raise InvalidDiscriminantError(f"{d} is not a negative discriminant")


def reduced_forms(d: int, primitive: bool = True) -> list[Form]:
    """
    Reduced positive definite forms (a, b, c) with b^2 - 4ac = d.

    Reduced means |b| <= a <= c, with b >= 0 whenever |b| = a or a = c.

    Raises:
        InvalidDiscriminantError: If d is not a negative discriminant
    """
    _check_discriminant(d)
    forms = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            numerator = b * b - d
            if numerator % (4 * a):
                continue
            c = numerator // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if primitive and gcd(gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return forms


@lru_cache(maxsize=4096)
def class_number(d: int) -> int:
    """
    Number h(d) of reduced primitive forms of discriminant d.

    Raises:
        InvalidDiscriminantError: If d >= 0 or d is not 0, 1 mod 4

    Example:
        >>> class_number(-20)
        2
    """
    return len(reduced_forms(d))


def weighted_class_number(d: int) -> Fraction:
    """h(d) divided by half the number of units: 1/3 at d = -3, 1/2 at d = -4."""
    h = class_number(d)
    if d == -3:
        return Fraction(h, 3)
    if d == -4:
        return Fraction(h, 2)
    return Fraction(h)


@lru_cache(maxsize=4096)
def hurwitz(delta: int) -> Fraction:
    """
    Hurwitz class number H(delta) = sum over f^2 | delta of h_w(delta / f^2).

    Values with delta not 0, 1 mod 4 are 0.

    Raises:
        InvalidDiscriminantError: If delta >= 0
    """
    if delta >= 0:
        raise InvalidDiscriminantError(f"Hurwitz class number needs delta < 0, got {delta}")
    if delta % 4 not in (0, 1):
        return Fraction(0)
    total = Fraction(0)
    f = 1
    while f * f <= -delta:
        if delta % (f * f) == 0 and (delta // (f * f)) % 4 in (0, 1):
            total += weighted_class_number(delta // (f * f))
        f += 1
    return total


def hurwitz_by_forms(delta: int) -> Fraction:
    """
    H(delta) as a weighted count of all reduced forms, primitive or not.

    Forms equivalent to a multiple of x^2 + y^2 count 1/2 and multiples
    of x^2 + xy + y^2 count 1/3. Independent of ``hurwitz``, which sums
    primitive class numbers over square divisors.
    """
    if delta >= 0:
        raise InvalidDiscriminantError(f"Hurwitz class number needs delta < 0, got {delta}")
    if delta % 4 not in (0, 1):
        return Fraction(0)
    total = Fraction(0)
    for a, b, c in reduced_forms(delta, primitive=False):
        if b == 0 and a == c:
            total += Fraction(1, 2)
        elif a == b == c:
            total += Fraction(1, 3)
        else:
            total += 1
    return total


@dataclass
class ClassNumberTable:
    """
    Precomputed class numbers for discriminants -bound <= d < 0.

    Attributes:
        bound: Largest |d| covered
        class_numbers: d -> h(d) for valid discriminants
        hurwitz_numbers: d -> H(d) for d = 0, 3 mod 4 in range
    """

    bound: int
    class_numbers: dict[int, int]
    hurwitz_numbers: dict[int, Fraction]

    def hurwitz(self, delta: int) -> Fraction:
        if -delta > self.bound:
            raise InvalidArgumentError(f"|{delta}| exceeds table bound {self.bound}")
        return self.hurwitz_numbers.get(delta, Fraction(0))


def class_number_table(bound: int) -> ClassNumberTable:
    """Tabulate h and H for every discriminant down to -bound."""
    h = {d: class_number(d) for d in range(-bound, 0) if d % 4 in (0, 1)}
    big_h = {d: hurwitz(d) for d in range(-bound, 0) if d % 4 in (0, 1)}
    return ClassNumberTable(bound, h, big_h)


# Power series


def euler_series(length: int, step: int = 1) -> list[int]:
    """Coefficients of prod_{m>=1} (1 - x^{step*m}) below x^length, by the pentagonal theorem."""
    out = [0] * length
    k = 0
    while step * k * (3 * k - 1) // 2 < length:
        sign = -1 if k % 2 else 1
        for e in {k * (3 * k - 1) // 2, k * (3 * k + 1) // 2}:
            if step * e < length:
                out[step * e] += sign
        k += 1
    return out


def series_power(base: list[int], exponent: int) -> list[int]:
    """
    base(x)^exponent truncated to len(base) terms, for base[0] = 1.

    Uses the J.C.P. Miller recurrence n f_n = sum_j ((r+1) j - n) g_j f_{n-j},
    which only touches the non-zero terms of the base.
    """
    if not base or base[0] != 1:
        raise InvalidArgumentError("series_power needs a constant term of 1")
    length = len(base)
    terms = [(j, b) for j, b in enumerate(base) if j and b]
    out = [0] * length
    out[0] = 1
    for n in range(1, length):
        acc = 0
        for j, b in terms:
            if j > n:
                break
            acc += ((exponent + 1) * j - n) * b * out[n - j]
        out[n] = acc // n
    return out


def series_product(a: list[int], b: list[int]) -> list[int]:
    """Truncated product of two series of equal length."""
    length = min(len(a), len(b))
    out = [0] * length
    for i, x in enumerate(a[:length]):
        if x:
            for j in range(length - i):
                out[i + j] += x * b[j]
    return out


def eta_product_coefficients(exponents: Mapping[int, int], length: int) -> list[int]:
    """
    Coefficients of prod_d prod_{m>=1} (1 - x^{d m})^{r_d} below x^length.

    Args:
        exponents: d -> r_d
        length: Number of coefficients

    Example:
        >>> eta_product_coefficients({1: 8}, 5)
        [1, -8, 20, 0, -70]
    """
    out = [1] + [0] * (length - 1)
    for step, exponent in sorted(exponents.items()):
        out = series_product(out, series_power(euler_series(length, step), exponent))
    return out


@lru_cache(maxsize=8)
def _tau_coefficients(length: int) -> tuple[int, ...]:
    logger.debug("Expanding Delta", terms=length)
    return tuple(series_power(euler_series(length), 24))


def _check_tau_bound(bound: int) -> None:
    if not 1 <= bound <= TAU_BOUND:
        raise InvalidArgumentError(f"tau bound must lie in [1, {TAU_BOUND}], got {bound}")


def tau(n: int, bound: int = TAU_BOUND) -> int:
    """
    Ramanujan's tau(n), the coefficient of x^n in x prod (1 - x^m)^24.

    Raises:
        InvalidArgumentError: If n < 1, n > bound, or bound > 10^4

    Example:
        >>> tau(5)
        4830
    """
    _check_tau_bound(bound)
    if not 1 <= n <= bound:
        raise InvalidArgumentError(f"tau needs 1 <= n <= {bound}, got {n}")
    length = max(64, 1 << (n - 1).bit_length())
    return _tau_coefficients(length)[n - 1]


@dataclass(frozen=True)
class TauTable:
    """
    Attributes:
        bound: Largest n covered
        values: tau(1), ..., tau(bound)
    """

    bound: int
    values: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.bound:
            raise InvalidArgumentError(f"tau table covers 1..{self.bound}, got {n}")
        return self.values[n - 1]


def tau_table(bound: int) -> TauTable:
    """tau(1..bound) in one expansion."""
    _check_tau_bound(bound)
    return TauTable(bound, _tau_coefficients(bound)[:bound])
