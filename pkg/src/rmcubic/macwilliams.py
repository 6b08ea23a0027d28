"""
Exact MacWilliams transforms and closed-form dual weight coefficients.

The dual enumerator is (1/|C|) W(X + (q-1)Y, X - Y). Enumerators here
count messages, so dividing by the sum of the coefficients (q^10, or the
kernel size times |C|) gives the dual of the image code.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Mapping, Optional

import structlog
import sympy

from rmcubic.arithfun import eta_product_coefficients, tau
from rmcubic.config import CodeVariant
from rmcubic.ecstats import (
    TorsionShape,
    TraceDistribution,
    torsion33_distribution_formula,
    torsion_restricted_moments,
    trace_distribution_formula,
)
from rmcubic.exceptions import InvalidArgumentError, NonIntegralCoefficientError, OutOfScopeError
from rmcubic.ff import field_for_order
from rmcubic.formulas import gl3_order
from rmcubic.models import ExactPolynomial, Number, WeightEnumerator

logger = structlog.get_logger(__name__)

DUAL_WEIGHTS = range(5, 11)


@lru_cache(maxsize=4096)
def krawtchouk_column(length: int, q: int, i: int) -> tuple[int, ...]:
    """
    Coefficients of Y^j, j = 0..length, in (X + (q-1)Y)^(length-i) (X - Y)^i.
    """
    if not 0 <= i <= length:
        raise InvalidArgumentError(f"weight {i} outside [0, {length}]")
    left = [comb(length - i, k) * (q - 1) ** k for k in range(length - i + 1)]
    right = [(-1) ** s * comb(i, s) for s in range(i + 1)]
    out = [0] * (length + 1)
    for a, x in enumerate(left):
        for b, y in enumerate(right):
            out[a + b] += x * y
    return tuple(out)


def krawtchouk(length: int, q: int, i: int, j: int) -> int:
    """Single value K_j(i) without building the whole column."""
    return sum(
        (-1) ** s * comb(i, s) * comb(length - i, j - s) * (q - 1) ** (j - s)
        for s in range(0, j + 1)
    )


def transform_exact(
    coeffs: Mapping[int, Number], length: int, q: int, scale: Number = 1
) -> ExactPolynomial:
    """
    scale * W(X + (q-1)Y, X - Y) for an arbitrary rational polynomial W.

    Partial enumerators (the singular part alone, say) transform to
    polynomials whose coefficients need not be integers.
    """
    out = [Fraction(0)] * (length + 1)
    for i, a in coeffs.items():
        if not a:
            continue
        column = krawtchouk_column(length, q, i)
        weight = Fraction(a) * Fraction(scale)
        for j, k in enumerate(column):
            if k:
                out[j] += weight * k
    return ExactPolynomial.from_mapping(length, dict(enumerate(out)))


def transform(enumerator: WeightEnumerator, q: int) -> WeightEnumerator:
    """
    Weight enumerator of the dual code.

    Raises:
        NonIntegralCoefficientError: If the input is not a code enumerator
        NegativeCoefficientError: Likewise
    """
    total = enumerator.total()
    if total <= 0:
        raise InvalidArgumentError("cannot transform an empty enumerator")
    poly = transform_exact(enumerator.as_dict(), enumerator.length, q, Fraction(1, total))
    dual = poly.to_enumerator()
    logger.debug("Transformed enumerator", q=q, N=enumerator.length, dual_support=len(dual.counts))
    return dual


def dual_coefficient(enumerator: WeightEnumerator, q: int, j: int) -> int:
    """Weight-j coefficient of the dual enumerator, computed directly."""
    value = Fraction(
        sum(a * krawtchouk(enumerator.length, q, i, j) for i, a in enumerator.counts),
        enumerator.total(),
    )
    if value.denominator != 1:
        raise NonIntegralCoefficientError(f"dual A_{j} = {value} is not an integer")
    return value.numerator


def _horner(coeffs: tuple[int, ...], x: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


# Highest power first.
_PROJ_J8 = (2, -3, 79, -797, 2829, -5110, 4200)
_PROJ_J9 = (1, 3, -16, -585, 4262, -7310, -24393, 138512, -293174, 333900, -176400)
_PROJ_J10 = (
    1, 0, -43, 117, -2327, 40444, -287841, 1088452, -2263884, 1782811, 3312614,
    -12006000, 17345160, -13807584, 5080320,
)
_AFF_J8 = (2, -17, 121, -1161, 7127, -23212, 39340, -29400)
_AFF_J9 = (1, -5, -12, -485, 8788, -53642, 142167, -30540, -818744, 2249352, -2731680, 1411200)
_AFF_J10 = (
    1, -9, -7, 384, -4514, 68191, -706065, 4482991, -18172206, 47512147, -75728017,
    54600840, 36872568, -125756064, 120294720, -45722880,
)


def _check_dual_args(q: int, j: int) -> int:
    spec = field_for_order(q)
    if j not in DUAL_WEIGHTS:
        raise InvalidArgumentError(f"closed-form dual coefficients cover j = 5..10, got {j}")
    if spec.p == 3:
        raise OutOfScopeError(
            f"no closed form in characteristic 3 (q = {q})", reason="char3-out-of-scope"
        )
    if spec.p == 2:
        raise OutOfScopeError(
            f"no closed form in characteristic 2 (q = {q})", reason="char2-out-of-scope"
        )
    if j == 10 and not spec.is_prime:
        raise OutOfScopeError(
            f"weight-10 closed form needs prime q, got {q}",
            reason="prime-power-hecke-term-not-computed",
        )
    return spec.p


def _exact(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise NonIntegralCoefficientError(f"{what} = {value} is not an integer")
    return value.numerator


def dual_coeff_projective(q: int, j: int) -> int:
    """
    Closed-form weight-j coefficient of the dual of the projective code.

    Raises:
        OutOfScopeError: For p in {2, 3}, or j = 10 with q not prime

    Example:
        >>> dual_coeff_projective(5, 5)
        744
    """
    _check_dual_args(q, j)
    if j == 10:
        p = q
        bracket = _horner(_PROJ_J10, p) - (p - 1) * p * p * tau(p)
        prefactor = p * (p + 1) * (p - 1) ** 2 * (p * p + p + 1)
        return _exact(Fraction(prefactor * bracket, factorial(10)), "dual A_10")
    polys = {
        5: q - 3,
        6: (q - 5) * (q - 4) * (q - 3),
        7: (q - 5) * (q - 4) * (q - 3) * (q * q - 6 * q + 15),
        8: (q - 3) * _horner(_PROJ_J8, q),
        9: _horner(_PROJ_J9, q),
    }
    prefactor = q * (q + 1) * (q - 1) ** 2 * (q - 2) * (q * q + q + 1)
    return _exact(Fraction(prefactor * polys[j], factorial(j)), f"dual A_{j}")


def dual_coeff_affine(q: int, j: int) -> int:
    """
    Closed-form weight-j coefficient of the dual of the affine code.

    Example:
        >>> dual_coeff_affine(5, 5)
        120
    """
    _check_dual_args(q, j)
    if j == 10:
        p = q
        bracket = _horner(_AFF_J10, p) - p * (p - 1) * (p * p - 9 * p + 36) * tau(p)
        prefactor = (p - 1) ** 2 * p * p * (p + 1)
        return _exact(Fraction(prefactor * bracket, factorial(10)), "dual A_10")
    polys = {
        5: (q - 4) * (q - 3),
        6: (q - 5) ** 2 * (q - 4) * (q - 3),
        7: (q - 6) * (q - 5) * (q - 4) * (q - 3) * (q * q - 6 * q + 15),
        8: (q - 3) * _horner(_AFF_J8, q),
        9: _horner(_AFF_J9, q),
    }
    prefactor = (q - 2) * (q - 1) ** 2 * q * q * (q + 1)
    return _exact(Fraction(prefactor * polys[j], factorial(j)), f"dual A_{j}")


def dual_coeff(q: int, j: int, variant: CodeVariant) -> int:
    if variant is CodeVariant.AFFINE:
        return dual_coeff_affine(q, j)
    return dual_coeff_projective(q, j)


def collinear_dual_count(q: int, j: int, variant: CodeVariant) -> int:
    """
    Dual words of weight j in {5, 6, 7}, counted as words supported on a line.

    Every such word lies on one line and is a full-support word of the
    dual of the Reed-Solomon code on that line's points.

    Example:
        >>> collinear_dual_count(5, 5, CodeVariant.PROJECTIVE)
        744
    """
    full_support = {
        5: q - 1,
        6: (q - 1) * (q - 5),
        7: (q - 1) * (q * q - 6 * q + 15),
    }
    if j not in full_support:
        raise InvalidArgumentError(f"collinear count covers j = 5, 6, 7, got {j}")
    if variant is CodeVariant.AFFINE:
        lines, per_line = q * q + q, q
    else:
        lines, per_line = q * q + q + 1, q + 1
    return lines * comb(per_line, j) * full_support[j]


def singular_weight_one(q: int, singular: WeightEnumerator) -> int:
    """Y coefficient of the untransformed-scale transform of the singular part."""
    n = singular.length
    return sum(a * ((q - 1) * n - q * i) for i, a in singular.counts)


def singular_weight_one_expected(q: int) -> int:
    return (q**3 - 1) * (q**3 - q) * (q**4 - q**3)


@dataclass(frozen=True)
class TorsionIdentityReport:
    """
    One restricted dual identity solved for its Hecke trace.

    Attributes:
        q: Prime field order
        shape: Torsion restriction of the sum
        j: Dual weight whose coefficient is taken
        coefficient: Restricted coefficient c (sum of masses times K_j)
        moment_coefficient: The same value through trace moments
        full_coefficient: q |GL3| c, the coefficient in the enumerator sum
        polynomial_part: Non-trace part of -48 c
        power: Exponent k with -48 c = polynomial_part + q^k Tr
        solved_trace: (-48 c - polynomial_part) / q^k
        eta_trace: Hecke eigenvalue read off the eta-product expansion
    """

    q: int
    shape: TorsionShape
    j: int
    coefficient: Fraction
    moment_coefficient: Fraction
    full_coefficient: Fraction
    polynomial_part: int
    power: int
    solved_trace: Fraction
    eta_trace: int

    @property
    def consistent(self) -> bool:
        return (
            self.coefficient == self.moment_coefficient
            and self.solved_trace.denominator == 1
            and self.solved_trace == self.eta_trace
        )

    def to_document(self) -> dict[str, str]:
        def render(x: Fraction) -> str:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        return {
            "q": str(self.q),
            "shape": self.shape.value,
            "j": str(self.j),
            "coefficient": render(self.coefficient),
            "moment_coefficient": render(self.moment_coefficient),
            "full_coefficient": render(self.full_coefficient),
            "polynomial_part": str(self.polynomial_part),
            "solved_trace": render(self.solved_trace),
            "eta_trace": str(self.eta_trace),
        }


def trace_kernel(q: int, j: int) -> sympy.Poly:
    """
    K_j as a polynomial in the trace t: the Y^j coefficient of
    (X + (q-1)Y)^(q+1-t) (X - Y)^(q^2+t).
    """
    t = sympy.Symbol("t")

    def falling(x: sympy.Expr, k: int) -> sympy.Expr:
        out: sympy.Expr = sympy.Integer(1)
        for m in range(k):
            out *= x - m
        return out / sympy.factorial(k)

    expr = sum(
        (-1) ** s * falling(q * q + t, s) * falling(q + 1 - t, j - s) * (q - 1) ** (j - s)
        for s in range(j + 1)
    )
    return sympy.Poly(sympy.expand(expr), t)


def _by_moments(
    q: int, j: int, shape: TorsionShape, distribution: Optional[TraceDistribution]
) -> Fraction:
    poly = trace_kernel(q, j)
    acc = Fraction(0)
    for (power,), coeff in poly.terms():
        rational = sympy.Rational(coeff)
        acc += Fraction(int(rational.p), int(rational.q)) * torsion_restricted_moments(
            q, power, shape, distribution
        )
    return acc / q


def torsion_dual_identities(
    q: int, distribution: Optional[TraceDistribution] = None
) -> TorsionIdentityReport:
    """
    Solve the 3-torsion restricted dual identity at a prime q.

    For q = 1 mod 3 the sum runs over classes with full rational 3-torsion
    and the weight-2 coefficient determines the weight-4 trace on the
    principal congruence subgroup of level 3. For q = 2 mod 3 it runs over
    classes with 3 | #E and the weight-4 coefficient determines the
    weight-6 trace at level Gamma_0(3).

    Raises:
        OutOfScopeError: If q is not a prime >= 5
    """
    spec = field_for_order(q)
    if not spec.is_prime or q < 5:
        raise OutOfScopeError(
            f"torsion identities need a prime q >= 5, got {q}", reason="prime-q-required"
        )

    if q % 3 == 1:
        shape, j, power = TorsionShape.Z3XZ3, 2, 1
        polynomial_part = 7 * q + 3
        if distribution is not None and distribution.full_torsion is not None:
            masses = distribution.full_torsion
        else:
            masses = torsion33_distribution_formula(q)
        eta_trace = eta_product_coefficients({1: 8}, (q - 1) // 3 + 1)[(q - 1) // 3]
    else:
        shape, j, power = TorsionShape.Z3, 4, 3
        polynomial_part = (q + 1) * (
            q**5 - 7 * q**4 + 20 * q**3 - 26 * q**2 + 13 * q + 2
        )
        all_masses = (distribution or trace_distribution_formula(q)).masses
        masses = {t: m for t, m in all_masses.items() if (q + 1 - t) % 3 == 0}
        eta_trace = eta_product_coefficients({1: 6, 3: 6}, q)[q - 1]

    n = q * q + q + 1
    coefficient = sum(
        (m * krawtchouk(n, q, q * q + t, j) for t, m in masses.items()), Fraction(0)
    )
    moment_coefficient = _by_moments(q, j, shape, distribution)
    solved = (-48 * coefficient - polynomial_part) / q**power
    report = TorsionIdentityReport(
        q=q,
        shape=shape,
        j=j,
        coefficient=coefficient,
        moment_coefficient=moment_coefficient,
        full_coefficient=coefficient * q * gl3_order(q),
        polynomial_part=polynomial_part,
        power=power,
        solved_trace=Fraction(solved),
        eta_trace=eta_trace,
    )
    if not report.consistent:
        logger.warning("Torsion identity mismatch", **report.to_document())
    return report
