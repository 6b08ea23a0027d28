"""
Result models shared across the rmcubic library.

Weight enumerators, exact rational polynomials and verification reports.
Every model renders to a document whose numbers are decimal strings
(rationals as "num/den") so that reports are exact and byte-stable.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping, Optional, Union

from rmcubic.exceptions import NegativeCoefficientError, NonIntegralCoefficientError

Number = Union[int, Fraction]


def render_number(value: Number) -> str:
    """Decimal string for an int, "num/den" for a non-integral Fraction."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def exact_int(value: Number, what: str = "coefficient") -> int:
    """
    Convert an exact rational to int.

    Raises:
        NonIntegralCoefficientError: If the value has a denominator
    """
    value = Fraction(value)
    if value.denominator != 1:
        raise NonIntegralCoefficientError(f"{what} {value} is not an integer")
    return value.numerator


@dataclass(frozen=True)
class WeightEnumerator:
    """
    Hamming weight enumerator of a code of length N.

    Counts are over messages, so for codes with a non-trivial kernel the
    weight-0 count is the kernel size.

    Attributes:
        length: Block length N
        counts: Sorted (weight, count) pairs with non-zero counts
    """

    length: int
    counts: tuple[tuple[int, int], ...]

    @classmethod
    def from_mapping(cls, length: int, mapping: Mapping[int, Number]) -> "WeightEnumerator":
        """
        Build from weight -> count, dropping zero counts.

        Raises:
            NonIntegralCoefficientError: If a count is not an integer
            NegativeCoefficientError: If a count is negative
            ValueError: If a weight lies outside [0, length]
        """
        pairs = []
        for weight, count in sorted(mapping.items()):
            value = exact_int(count, f"A_{weight}")
            if value < 0:
                raise NegativeCoefficientError(f"A_{weight} = {value} is negative")
            if value == 0:
                continue
            if not 0 <= weight <= length:
                raise ValueError(f"weight {weight} outside [0, {length}]")
            pairs.append((weight, value))
        return cls(length, tuple(pairs))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def coefficient(self, weight: int) -> int:
        return self.as_dict().get(weight, 0)

    def total(self) -> int:
        return sum(count for _, count in self.counts)

    def support(self) -> list[int]:
        return [weight for weight, _ in self.counts]

    def __add__(self, other: "WeightEnumerator") -> "WeightEnumerator":
        if other.length != self.length:
            raise ValueError(f"length mismatch: {self.length} != {other.length}")
        acc = self.as_dict()
        for weight, count in other.counts:
            acc[weight] = acc.get(weight, 0) + count
        return WeightEnumerator.from_mapping(self.length, acc)

    def to_document(self, q: int, code: str, method: str) -> dict[str, Any]:
        return {
            "q": str(q),
            "code": code,
            "method": method,
            "N": str(self.length),
            "coeffs": [[str(w), str(c)] for w, c in self.counts],
        }

    def to_rows(self) -> list[list[str]]:
        return [["weight", "count"]] + [[str(w), str(c)] for w, c in self.counts]


@dataclass(frozen=True)
class ExactPolynomial:
    """
    A homogeneous polynomial sum_i c_i X^{N-i} Y^i with rational coefficients.

    Used for partial transforms (for example the singular part alone),
    whose coefficients need not be integers.
    """

    length: int
    coeffs: tuple[tuple[int, Fraction], ...]

    @classmethod
    def from_mapping(cls, length: int, mapping: Mapping[int, Number]) -> "ExactPolynomial":
        return cls(length, tuple((i, Fraction(c)) for i, c in sorted(mapping.items()) if c))

    def coefficient(self, i: int) -> Fraction:
        return dict(self.coeffs).get(i, Fraction(0))

    def to_enumerator(self) -> WeightEnumerator:
        return WeightEnumerator.from_mapping(self.length, dict(self.coeffs))


class CheckStatus(Enum):
    """
    Attributes:
        PASS: Value matches its oracle
        FAIL: Value disagrees with its oracle
        SKIPPED: Not evaluated; ``reason`` says why
    """

    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass
class CheckResult:
    """
    Outcome of one verification check.

    Attributes:
        name: Stable check identifier, e.g. ``census/cusp``
        status: Pass, fail or skipped
        expected: Oracle value as a decimal string
        actual: Computed value as a decimal string
        reason: Skip reason or explanatory note
    """

    name: str
    status: CheckStatus
    expected: Optional[str] = None
    actual: Optional[str] = None
    reason: Optional[str] = None

    def to_document(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"name": self.name, "status": self.status.value}
        if self.expected is not None:
            doc["expected"] = self.expected
        if self.actual is not None:
            doc["actual"] = self.actual
        if self.reason is not None:
            doc["reason"] = self.reason
        return doc


@dataclass
class VerificationReport:
    """
    All checks of one ``verify`` run.

    Attributes:
        q: Field order
        suite: Suite name
        checks: Individual check outcomes, in execution order
    """

    q: int
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.status is CheckStatus.PASS)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.checks if c.status is CheckStatus.FAIL)

    @property
    def skipped(self) -> int:
        return sum(1 for c in self.checks if c.status is CheckStatus.SKIPPED)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_document(self) -> dict[str, Any]:
        return {
            "q": str(self.q),
            "suite": self.suite,
            "passed": str(self.passed),
            "failed": str(self.failed),
            "skipped": str(self.skipped),
            "checks": [c.to_document() for c in self.checks],
        }

    def to_rows(self) -> list[list[str]]:
        rows = [["name", "status", "expected", "actual", "reason"]]
        for c in self.checks:
            rows.append(
                [c.name, c.status.value, c.expected or "", c.actual or "", c.reason or ""]
            )
        return rows
