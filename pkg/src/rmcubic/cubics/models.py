"""
Data models for plane cubics and the Reed-Muller codes they span.

Message coordinates follow the graded-lexicographic monomial order in
MONOMIALS. The affine code uses the same order with x2 set to 1, so a
message means the same cubic in both codes.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Mapping, Optional, Sequence

import numpy as np

from rmcubic.config import CodeVariant
from rmcubic.cubics.forms import Exponent, TernaryForm
from rmcubic.exceptions import FieldError
from rmcubic.ff import FieldSpec
from rmcubic.plane import Convention, Point, affine_representatives, enumerate_projective_points

MONOMIALS: tuple[Exponent, ...] = (
    (3, 0, 0),
    (2, 1, 0),
    (2, 0, 1),
    (1, 2, 0),
    (1, 1, 1),
    (1, 0, 2),
    (0, 3, 0),
    (0, 2, 1),
    (0, 1, 2),
    (0, 0, 3),
)

# x^3, x^2 y, x^2, x y^2, x y, x, y^3, y^2, y, 1
AFFINE_MONOMIALS: tuple[tuple[int, int], ...] = tuple((a, b) for a, b, _ in MONOMIALS)


class CubicKind(Enum):
    """
    Geometric type of a plane cubic over F_q.

    "Pair" means a pair of conjugate lines over F_{q^2}; "conjugate
    triple" means three lines permuted by Frobenius over F_{q^3}.
    """

    ZERO = "zero"
    TRIPLE_LINE = "triple_line"
    LINE_DOUBLE_LINE = "line_double_line"
    CONCURRENT_RATIONAL = "concurrent_rational"
    CONCURRENT_RATIONAL_PAIR = "concurrent_rational_pair"
    CONCURRENT_CONJUGATE_TRIPLE = "concurrent_conjugate_triple"
    NONCONCURRENT_RATIONAL = "nonconcurrent_rational"
    NONCONCURRENT_RATIONAL_PAIR = "nonconcurrent_rational_pair"
    NONCONCURRENT_CONJUGATE_TRIPLE = "nonconcurrent_conjugate_triple"
    CONIC_TANGENT_LINE = "conic_tangent_line"
    CONIC_SECANT_RATIONAL = "conic_secant_rational"
    CONIC_SECANT_CONJUGATE = "conic_secant_conjugate"
    CUSP = "cusp"
    SPLIT_NODE = "split_node"
    NONSPLIT_NODE = "nonsplit_node"
    SMOOTH = "smooth"

    @property
    def is_singular(self) -> bool:
        return self is not CubicKind.SMOOTH

    @property
    def is_absolutely_irreducible(self) -> bool:
        return self in IRREDUCIBLE_KINDS

    @property
    def contains_rational_line(self) -> bool:
        return self in LINE_KINDS


SINGULAR_KINDS: tuple[CubicKind, ...] = tuple(k for k in CubicKind if k is not CubicKind.SMOOTH)

IRREDUCIBLE_SINGULAR_KINDS = frozenset(
    {CubicKind.CUSP, CubicKind.SPLIT_NODE, CubicKind.NONSPLIT_NODE}
)
IRREDUCIBLE_KINDS = IRREDUCIBLE_SINGULAR_KINDS | {CubicKind.SMOOTH}

LINE_KINDS = frozenset(
    {
        CubicKind.TRIPLE_LINE,
        CubicKind.LINE_DOUBLE_LINE,
        CubicKind.CONCURRENT_RATIONAL,
        CubicKind.CONCURRENT_RATIONAL_PAIR,
        CubicKind.NONCONCURRENT_RATIONAL,
        CubicKind.NONCONCURRENT_RATIONAL_PAIR,
        CubicKind.CONIC_TANGENT_LINE,
        CubicKind.CONIC_SECANT_RATIONAL,
        CubicKind.CONIC_SECANT_CONJUGATE,
    }
)


@dataclass(frozen=True)
class CubicClass:
    """
    Classification result.

    Attributes:
        kind: Geometric type
        trace: Frobenius trace q + 1 - #C(F_q) for smooth cubics, else None
    """

    kind: CubicKind
    trace: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is CubicKind.SMOOTH:
            return f"smooth(t={self.trace})"
        return self.kind.value


@dataclass(frozen=True)
class HomogeneousCubic:
    """
    A ternary cubic form, coefficients in MONOMIALS order.

    Attributes:
        field: Coefficient field
        coeffs: Ten element codes
    """

    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(MONOMIALS):
            raise FieldError(f"a cubic has 10 coefficients, got {len(self.coeffs)}")
        for c in self.coeffs:
            self.field.check(c)

    @classmethod
    def from_terms(cls, field: FieldSpec, terms: Mapping[Exponent, int]) -> "HomogeneousCubic":
        unknown = set(terms) - set(MONOMIALS)
        if unknown:
            raise FieldError(f"not cubic monomials: {sorted(unknown)}")
        return cls(field, tuple(terms.get(m, 0) % field.q for m in MONOMIALS))

    @classmethod
    def from_form(cls, form: TernaryForm) -> "HomogeneousCubic":
        return cls.from_terms(form.field, form.as_dict())

    @cached_property
    def form(self) -> TernaryForm:
        return TernaryForm.from_dict(self.field, dict(zip(MONOMIALS, self.coeffs)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def evaluate(self, point: Sequence[int]) -> int:
        return self.form.evaluate(point)

    def dehomogenize(self) -> "AffineCubic":
        """Set x2 = 1."""
        return AffineCubic(self.field, self.coeffs)


@dataclass(frozen=True)
class AffineCubic:
    """
    A polynomial of degree at most 3 in x, y, coefficients in AFFINE_MONOMIALS order.

    Attributes:
        field: Coefficient field
        coeffs: Ten element codes
    """

    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(AFFINE_MONOMIALS):
            raise FieldError(f"an affine cubic has 10 coefficients, got {len(self.coeffs)}")
        for c in self.coeffs:
            self.field.check(c)

    def homogenize(self) -> HomogeneousCubic:
        return HomogeneousCubic(self.field, self.coeffs)

    def evaluate(self, x: int, y: int) -> int:
        return self.homogenize().evaluate((x, y, 1))


@dataclass(frozen=True)
class CodeSpec:
    """
    An evaluation code of cubics.

    Attributes:
        variant: Projective (all of P^2) or affine (the complement of a line)
        field: Base field
        convention: Representative convention for projective points
        deleted_hyperplane: Coordinate set to 1 for the affine code
    """

    variant: CodeVariant
    field: FieldSpec
    convention: Convention = Convention.FIRST_NONZERO
    deleted_hyperplane: int = 2

    @property
    def dimension(self) -> int:
        return len(MONOMIALS)

    @property
    def length(self) -> int:
        q = self.field.q
        return q * q + q + 1 if self.variant is CodeVariant.PROJECTIVE else q * q

    @cached_property
    def points(self) -> list[Point]:
        if self.variant is CodeVariant.PROJECTIVE:
            return enumerate_projective_points(self.field, self.convention)
        return affine_representatives(self.field, self.deleted_hyperplane)

    def generator_matrix(self) -> np.ndarray:
        """Monomial values at the evaluation points, shape (10, N)."""
        f = self.field
        matrix = np.zeros((len(MONOMIALS), self.length), dtype=f.code_dtype)
        for k, point in enumerate(self.points):
            for i, exponent in enumerate(MONOMIALS):
                value = 1
                for x, e in zip(point, exponent):
                    value = f.mul(value, f.pow(x, e))
                matrix[i, k] = value
        return matrix


@dataclass(frozen=True)
class CubicProfile:
    """
    Classification plus incidence statistics of one cubic.

    Attributes:
        cubic_class: Kind and, for smooth cubics, the trace
        weight: Number of points of P^2(F_q) off the curve
        inflections: Rational flex count (absolutely irreducible cubics only)
        line_profile: (L0, L1, L2, L3) for absolutely irreducible cubics
    """

    cubic_class: CubicClass
    weight: int
    inflections: Optional[int] = None
    line_profile: Optional[tuple[int, int, int, int]] = None
