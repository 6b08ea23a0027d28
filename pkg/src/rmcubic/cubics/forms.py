"""
Sparse ternary forms over a FieldSpec.

A form is a tuple of (exponent, coefficient) pairs with non-zero
coefficients, sorted by exponent. Forms support the handful of operations
the classifier needs: evaluation, partial derivatives, linear changes of
variables, restriction to a line and exact division by a linear form.
"""

from dataclasses import dataclass
from typing import Mapping, Sequence

from rmcubic.exceptions import ClassificationError
from rmcubic.ff import FieldSpec

Exponent = tuple[int, int, int]


@dataclass(frozen=True)
class TernaryForm:
    """
    A homogeneous polynomial in x0, x1, x2.

    Attributes:
        field: Coefficient field
        terms: Sorted (exponent, coefficient code) pairs, coefficients non-zero
    """

    field: FieldSpec
    terms: tuple[tuple[Exponent, int], ...]

    @classmethod
    def from_dict(cls, field: FieldSpec, mapping: Mapping[Exponent, int]) -> "TernaryForm":
        return cls(field, tuple(sorted((e, c) for e, c in mapping.items() if c)))

    @classmethod
    def linear(cls, field: FieldSpec, coeffs: Sequence[int]) -> "TernaryForm":
        units: tuple[Exponent, ...] = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        return cls.from_dict(field, dict(zip(units, coeffs)))

    @classmethod
    def constant(cls, field: FieldSpec, c: int) -> "TernaryForm":
        return cls.from_dict(field, {(0, 0, 0): c})

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponent: Exponent) -> int:
        return self.as_dict().get(exponent, 0)

    def __add__(self, other: "TernaryForm") -> "TernaryForm":
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = self.field.add(acc.get(e, 0), c)
        return TernaryForm.from_dict(self.field, acc)

    def __mul__(self, other: "TernaryForm") -> "TernaryForm":
        f = self.field
        acc: dict[Exponent, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                acc[e] = f.add(acc.get(e, 0), f.mul(c1, c2))
        return TernaryForm.from_dict(f, acc)

    def scale(self, c: int) -> "TernaryForm":
        return TernaryForm.from_dict(self.field, {e: self.field.mul(c, v) for e, v in self.terms})

    def evaluate(self, point: Sequence[int]) -> int:
        f = self.field
        acc = 0
        for (a, b, c), coeff in self.terms:
            value = f.mul(f.mul(f.pow(point[0], a), f.pow(point[1], b)), f.pow(point[2], c))
            acc = f.add(acc, f.mul(coeff, value))
        return acc

    def partial(self, j: int) -> "TernaryForm":
        f = self.field
        acc: dict[Exponent, int] = {}
        for e, c in self.terms:
            if e[j] == 0:
                continue
            lowered = list(e)
            lowered[j] -= 1
            acc[(lowered[0], lowered[1], lowered[2])] = f.mul(e[j] % f.p, c)
        return TernaryForm.from_dict(f, acc)

    def gradient(self, point: Sequence[int]) -> tuple[int, int, int]:
        g0, g1, g2 = (self.partial(j).evaluate(point) for j in range(3))
        return (g0, g1, g2)

    def compose(self, matrix: Sequence[Sequence[int]]) -> "TernaryForm":
        """Substitute x_i = sum_j matrix[i][j] * y_j."""
        f = self.field
        images = [TernaryForm.linear(f, row) for row in matrix]
        one = TernaryForm.constant(f, 1)
        powers: list[list[TernaryForm]] = []
        for image in images:
            chain = [one]
            for _ in range(3):
                chain.append(chain[-1] * image)
            powers.append(chain)

        result = TernaryForm(f, ())
        for (a, b, c), coeff in self.terms:
            term = powers[0][a] * powers[1][b] * powers[2][c]
            result = result + term.scale(coeff)
        return result

    def restrict(self, p: Sequence[int], q: Sequence[int], degree: int = 3) -> tuple[int, ...]:
        """
        Coefficients of the binary form b(s, u) = self(s*p + u*q).

        Returned in the order s^d, s^{d-1} u, ..., u^d.
        """
        matrix = [(p[i], q[i], 0) for i in range(3)]
        binary = self.compose(matrix).as_dict()
        return tuple(binary.get((degree - r, r, 0), 0) for r in range(degree + 1))

    def divide_by_linear(self, linear: Sequence[int]) -> "TernaryForm":
        """
        Exact quotient by a*x0 + b*x1 + c*x2.

        Raises:
            ClassificationError: If the division leaves a remainder
        """
        f = self.field
        pivot = max(i for i in range(3) if linear[i])
        # Make the linear form monic in its pivot variable
        inv = f.inv(linear[pivot])
        monic = [f.mul(inv, c) for c in linear]

        remainder = self.as_dict()
        quotient: dict[Exponent, int] = {}
        while True:
            candidates = [e for e, c in remainder.items() if c and e[pivot] > 0]
            if not candidates:
                break
            lead = max(candidates, key=lambda e: (e[pivot], e))
            c = remainder[lead]
            lowered = list(lead)
            lowered[pivot] -= 1
            q_exp = (lowered[0], lowered[1], lowered[2])
            quotient[q_exp] = f.add(quotient.get(q_exp, 0), c)
            for i in range(3):
                if monic[i]:
                    raised = list(q_exp)
                    raised[i] += 1
                    key = (raised[0], raised[1], raised[2])
                    remainder[key] = f.sub(remainder.get(key, 0), f.mul(c, monic[i]))
        if any(remainder.values()):
            raise ClassificationError("form is not divisible by the given linear form")
        return TernaryForm.from_dict(f, {e: f.mul(c, inv) for e, c in quotient.items()})


def binary_root_count(field: FieldSpec, coeffs: Sequence[int]) -> int:
    """
    Number of distinct points [s:u] of P^1(F_q) where a binary form vanishes.

    Args:
        field: Coefficient field
        coeffs: Coefficients in the order s^d, s^{d-1} u, ..., u^d
    """
    d = len(coeffs) - 1
    count = 1 if coeffs[d] == 0 else 0  # the point [0:1]
    for u in field.elements():
        acc = 0
        power = 1
        for r in range(d + 1):
            acc = field.add(acc, field.mul(coeffs[r], power))
            power = field.mul(power, u)
        if acc == 0:
            count += 1
    return count
