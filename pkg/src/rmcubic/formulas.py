"""
Closed-form weight enumerators of the projective and affine cubic codes.

Each enumerator is assembled from exact pieces: a census of singular
cubics by geometric type, smooth cubics weighted by the trace
distribution of elliptic curves, and for the affine code the way the
deleted line meets each curve. Pieces are accumulated as Fractions and
converted to integers at the end; a leftover denominator raises
NonIntegralCoefficientError.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

import structlog

from rmcubic.cubics.engine import CensusResult, CensusRow
from rmcubic.cubics.models import CubicKind
from rmcubic.ecstats import TraceDistribution, trace_distribution_formula
from rmcubic.exceptions import InvalidArgumentError, OutOfScopeError
from rmcubic.ff import field_for_order
from rmcubic.models import Number, WeightEnumerator, exact_int

logger = structlog.get_logger(__name__)

Polynomial = dict[int, Fraction]


def gl3_order(q: int) -> int:
    return (q**3 - 1) * (q**3 - q) * (q**3 - q**2)


def _add(acc: Polynomial, weight: int, count: Number) -> None:
    acc[weight] = acc.get(weight, Fraction(0)) + Fraction(count)


def _scaled(acc: Polynomial, pieces: list[tuple[int, Fraction]], factor: Number) -> None:
    for weight, count in pieces:
        _add(acc, weight, Fraction(factor) * count)


def _enumerator(length: int, poly: Polynomial) -> WeightEnumerator:
    return WeightEnumerator.from_mapping(length, poly)


def _require_order(q: int, minimum: int = 2) -> int:
    p = field_for_order(q).p
    if q < minimum:
        raise InvalidArgumentError(f"formula needs q >= {minimum}, got {q}")
    return p


@dataclass(frozen=True)
class SingularRow:
    """
    Attributes:
        count: Number of cubic forms of the kind
        weight: Their common projective weight
    """

    count: int
    weight: int


def singular_table(q: int) -> dict[CubicKind, SingularRow]:
    """
    Counts and projective weights of the fifteen singular kinds.

    Example:
        >>> singular_table(2)[CubicKind.CONIC_SECANT_RATIONAL].count
        84
    """
    _require_order(q)
    a = q**3 - 1
    b = q**3 - q
    c = q**3 - q**2
    rows = {
        CubicKind.ZERO: (1, 0),
        CubicKind.TRIPLE_LINE: (a, q * q),
        CubicKind.LINE_DOUBLE_LINE: (a * (q * q + q), q * q - q),
        CubicKind.CONCURRENT_RATIONAL: (a * b // 6, q * q - 2 * q),
        CubicKind.CONCURRENT_RATIONAL_PAIR: (a * b // 2, q * q),
        CubicKind.CONCURRENT_CONJUGATE_TRIPLE: (a * b // 3, q * q + q),
        CubicKind.NONCONCURRENT_RATIONAL: (a * (q**4 + q**3) // 6, q * q - 2 * q + 1),
        CubicKind.NONCONCURRENT_RATIONAL_PAIR: (a * q**3 * (q - 1) // 2, q * q - 1),
        CubicKind.NONCONCURRENT_CONJUGATE_TRIPLE: ((q - 1) * b * c // 3, q * q + q + 1),
        CubicKind.CONIC_TANGENT_LINE: (a * (q * q + q) * (q * q - q), q * q - q),
        CubicKind.CONIC_SECANT_RATIONAL: ((q**6 - q**3) * (q * q - 1) // 2, q * q - q + 1),
        CubicKind.CONIC_SECANT_CONJUGATE: (a * c * (q * q - q) // 2, q * q - q - 1),
        CubicKind.CUSP: (a * b * q * q, q * q),
        CubicKind.SPLIT_NODE: (a * b * c // 2, q * q + 1),
        CubicKind.NONSPLIT_NODE: (a * b * c // 2, q * q - 1),
    }
    return {kind: SingularRow(count, weight) for kind, (count, weight) in rows.items()}


def w_sing_projective(q: int) -> WeightEnumerator:
    """Weight enumerator of the singular cubic forms (zero form included)."""
    _require_order(q)
    a = q**3 - 1
    pieces = [
        (0, Fraction(1)),
        (q * q - 2 * q, Fraction(a * (q**3 - q), 6)),
        (q * q - 2 * q + 1, Fraction(a * (q**4 + q**3), 6)),
        (q * q - q - 1, Fraction(a * (q**3 - q**2) * (q * q - q), 2)),
        (q * q - q, Fraction(a * (q * q + q) * (q * q - q + 1))),
        (q * q - q + 1, Fraction((q**6 - q**3) * (q * q - 1), 2)),
        (q * q - 1, Fraction(a * (q**6 - q**5), 2)),
        (q * q, Fraction(a * (2 * q**5 - q**3 - q + 2), 2)),
        (q * q + 1, Fraction(a * (q**3 - q) * (q**3 - q**2), 2)),
        (q * q + q, Fraction(a * (q**3 - q), 3)),
        (q * q + q + 1, Fraction((q - 1) * (q**3 - q) * (q**3 - q**2), 3)),
    ]
    acc: Polynomial = {}
    _scaled(acc, pieces, 1)
    return _enumerator(q * q + q + 1, acc)


def w_smooth_projective(
    q: int, distribution: Optional[TraceDistribution] = None
) -> WeightEnumerator:
    """
    Weight enumerator of the smooth cubic forms.

    Forms with trace t number q |GL3(F_q)| P_q(t) and have weight q^2 + t.
    """
    _require_order(q)
    distribution = distribution or trace_distribution_formula(q)
    scale = q * gl3_order(q)
    acc: Polynomial = {}
    for t, mass in distribution.masses.items():
        _add(acc, q * q + t, scale * mass)
    return _enumerator(q * q + q + 1, acc)


def w_projective(q: int, distribution: Optional[TraceDistribution] = None) -> WeightEnumerator:
    """
    Full weight enumerator of the projective code.

    Example:
        >>> w_projective(5).coefficient(15)
        2480
    """
    enumerator = w_sing_projective(q) + w_smooth_projective(q, distribution)
    logger.debug("Assembled projective enumerator", q=q, support=len(enumerator.counts))
    return enumerator


def _require_affine(q: int) -> None:
    p = _require_order(q, minimum=3)
    if p == 3:
        raise OutOfScopeError(
            f"affine closed forms exclude characteristic 3 (q = {q})", reason="char3-out-of-scope"
        )


def _cusp_pieces(q: int) -> list[tuple[int, Fraction]]:
    prefactor = Fraction((q - 1) * (q**3 - q) * q * q)
    bracket = [
        (q * q - q - 1, Fraction((q + 1) * (q - 1), 3)),
        (q * q - q, Fraction(q * q - q + 4, 2)),
        (q * q - q + 1, Fraction(2 * q - 1)),
        (q * q - q + 2, Fraction((q - 1) * (q - 2), 6)),
    ]
    return [(w, prefactor * c) for w, c in bracket]


def _node_prefactor(q: int) -> Fraction:
    return Fraction((q - 1) * (q**3 - q) * (q**3 - q**2), 2)


def _split_node_pieces(q: int) -> list[tuple[int, Fraction]]:
    bracket = [
        (q * q - q, Fraction(q * (q + 1), 3)),
        (q * q - q + 1, Fraction(q * q - q + 6, 2)),
        (q * q - q + 2, Fraction(2 * q - 3)),
        (q * q - q + 3, Fraction((q - 2) * (q - 3), 6)),
    ]
    return [(w, _node_prefactor(q) * c) for w, c in bracket]


def _nonsplit_node_pieces(q: int) -> list[tuple[int, Fraction]]:
    bracket = [
        (q * q - q - 2, Fraction(q * (q - 1), 3)),
        (q * q - q - 1, Fraction(q * (q - 1), 2)),
        (q * q - q, Fraction(2 * q + 1)),
        (q * q - q + 1, Fraction(q * (q - 1), 6)),
    ]
    return [(w, _node_prefactor(q) * c) for w, c in bracket]


def w_sing_irred_affine(q: int) -> WeightEnumerator:
    """
    Affine weights of cusps, split nodes and non-split nodes.

    Raises:
        OutOfScopeError: In characteristic 3
    """
    _require_affine(q)
    acc: Polynomial = {}
    for pieces in (_cusp_pieces(q), _split_node_pieces(q), _nonsplit_node_pieces(q)):
        _scaled(acc, pieces, 1)
    return _enumerator(q * q, acc)


def w_noline_affine(q: int) -> WeightEnumerator:
    """
    Affine weights of reducible cubics containing no affine rational line.

    These are the conjugate line triples and the products of the deleted
    line with itself, with an irreducible conic, or with a conjugate pair.
    """
    _require_affine(q)
    pieces = [
        # conjugate triples: concurrent with affine vertex, vertex at infinity, non-concurrent
        (q * q - 1, Fraction((q - 1) * q * q * (q**3 - q), 3)),
        (q * q, Fraction((q - 1) * (q + 1) * (q**3 - q), 3)),
        (q * q, Fraction((q - 1) ** 2 * (q**5 - q**3), 3)),
        # the deleted line tripled
        (q * q, Fraction(q - 1)),
        # deleted line times a smooth conic: tangent, secant, conjugate secant
        (q * q - q, Fraction((q - 1) ** 2 * (q + 1) * q * q)),
        (q * q - q + 1, Fraction((q - 1) ** 2 * q**3 * (q + 1), 2)),
        (q * q - q - 1, Fraction((q - 1) ** 3 * q**3, 2)),
        # deleted line times a conjugate pair: affine vertex, vertex at infinity
        (q * q - 1, Fraction((q - 1) * q * q * (q * q - q), 2)),
        (q * q, Fraction((q - 1) * (q + 1) * (q * q - q), 2)),
    ]
    acc: Polynomial = {}
    _scaled(acc, pieces, 1)
    return _enumerator(q * q, acc)


def affine_line_polynomial(q: int) -> dict[int, Fraction]:
    """
    Affine weights of the non-zero cubics divisible by one fixed affine line.

    The coefficients sum to q^6 - 1. Several weights coincide for q < 5,
    so the pieces are accumulated rather than keyed directly.
    """
    cube = (q - 1) ** 3
    pieces = [
        (q * q - q, Fraction((q - 1) * (2 * q**3 - q * q - q + 6), 2)),
        (q * q - q - 1, Fraction(q * q * cube, 2)),
        (q * q - 2 * q + 3, Fraction((q - 2) * q * q * cube, 4)),
        (q * q - 2 * q + 2, Fraction(2 * q * q * cube)),
        (q * q - 2 * q + 1, Fraction((q - 1) * q**3 * (q * q - 2 * q + 7), 2)),
        (q * q - 2 * q, Fraction((q - 1) ** 2 * (q**3 - q * q + 3))),
        (q * q - 2 * q - 1, Fraction((q - 2) * q * q * cube, 4)),
        (q * q - 3 * q + 3, Fraction(q * q * cube, 2)),
        (q * q - 3 * q + 2, Fraction(2 * (q - 1) ** 2 * q * q)),
        (q * q - 3 * q, Fraction((q - 2) * (q - 1) ** 2, 2)),
    ]
    acc: Polynomial = {}
    _scaled(acc, pieces, 1)
    return acc


def _two_line_overcount(q: int) -> Polynomial:
    """Cubics divisible by exactly two affine lines, counted once per extra line."""
    acc: Polynomial = {}
    _add(acc, q * q - 2 * q + 1, Fraction(3 * (q - 1) * q**3 * (q + 1), 2))
    _add(acc, q * q - 2 * q, Fraction(3 * (q - 1) * (q + 1) * q * (q - 1), 2))
    return acc


def _three_line_overcount(q: int) -> Polynomial:
    """Products of three distinct affine lines."""
    acc: Polynomial = {}
    triples = comb(q + 1, 3)
    _add(acc, q * q - 3 * q + 3, Fraction((q - 1) * triples * q * q * (q - 1)))
    middle = q * q * triples + (q + 1) * comb(q, 2) * q * q
    _add(acc, q * q - 3 * q + 2, Fraction((q - 1) * middle))
    _add(acc, q * q - 3 * q, Fraction((q - 1) * (q + 1) * comb(q, 3)))
    return acc


def w_line_affine(q: int) -> WeightEnumerator:
    """
    Affine weights of cubics containing at least one affine rational line.

    Inclusion-exclusion over the q^2 + q affine lines: cubics with two
    distinct affine lines are counted twice by the per-line sum and those
    with three distinct lines three times.
    """
    _require_affine(q)
    acc: Polynomial = {}
    lines = q * q + q
    for weight, count in affine_line_polynomial(q).items():
        _add(acc, weight, lines * count)
    for weight, count in _two_line_overcount(q).items():
        _add(acc, weight, -count)
    for weight, count in _three_line_overcount(q).items():
        _add(acc, weight, -2 * count)
    return _enumerator(q * q, acc)


def smooth_line_weights(q: int, t: int) -> dict[int, Fraction]:
    """
    Average affine weight distribution of a smooth cubic with trace t.

    Averaged over the choice of deleted line; the coefficients sum to
    q^2 + q + 1.
    """
    return {
        q * q - q - 1 + t: Fraction(q * q + q * t + t * t - q + t, 3),
        q * q - q + t: Fraction(q * q - t * t + q + t + 2, 2),
        q * q - q + 1 + t: Fraction(q - t),
        q * q - q + 2 + t: Fraction((q - t) * (q - t - 1), 6),
    }


def w_smooth_affine(q: int, distribution: Optional[TraceDistribution] = None) -> WeightEnumerator:
    """
    Affine weight enumerator of the smooth cubics.

    Every trace contributes, including traces with 3 | q + 1 - t.

    Raises:
        OutOfScopeError: In characteristic 3
    """
    _require_affine(q)
    distribution = distribution or trace_distribution_formula(q)
    scale = q * (q - 1) * (q**3 - q) * (q**3 - q**2)
    acc: Polynomial = {}
    for t, mass in distribution.masses.items():
        for weight, count in smooth_line_weights(q, t).items():
            _add(acc, weight, scale * mass * count)
    return _enumerator(q * q, acc)


def w_affine(q: int, distribution: Optional[TraceDistribution] = None) -> WeightEnumerator:
    """
    Full weight enumerator of the affine code.

    Raises:
        OutOfScopeError: In characteristic 3
    """
    zero = WeightEnumerator.from_mapping(q * q, {0: 1})
    enumerator = (
        zero
        + w_smooth_affine(q, distribution)
        + w_sing_irred_affine(q)
        + w_noline_affine(q)
        + w_line_affine(q)
    )
    logger.debug("Assembled affine enumerator", q=q, support=len(enumerator.counts))
    return enumerator


def line_counts_smooth(q: int, t: int, flexes: int) -> tuple[int, int, int, int]:
    """
    (L0, L1, L2, L3) of a smooth cubic with trace t and the given flex count.

    Raises:
        InvalidArgumentError: If the counts come out non-integral or negative
    """
    points = q + 1 - t
    l2 = points - flexes
    return _solve_line_counts(q, points, l2, Fraction(comb(points, 2) - l2, 3))


def line_counts_singular(q: int, t: int, flexes: int) -> tuple[int, int, int, int]:
    """
    (L0, L1, L2, L3) of an irreducible singular cubic with q + 1 - t points.

    The trace is 0 for a cusp, 1 for a split node and -1 for a non-split node.
    """
    points = q + 1 - t
    l2 = 2 * q - 2 * t - flexes
    return _solve_line_counts(q, points, l2, Fraction(comb(q - t, 2) - (q - t - flexes), 3))


def _solve_line_counts(
    q: int, points: int, l2: int, l3: Fraction
) -> tuple[int, int, int, int]:
    if l3.denominator != 1:
        raise InvalidArgumentError(f"non-integral three-point line count {l3}")
    l3_int = l3.numerator
    l1 = (q + 1) * points - 2 * l2 - 3 * l3_int
    l0 = q * q + q + 1 - l1 - l2 - l3_int
    counts = (l0, l1, l2, l3_int)
    if min(counts) < 0:
        raise InvalidArgumentError(f"negative line counts {counts}")
    return counts


def formula_census(q: int, distribution: Optional[TraceDistribution] = None) -> CensusResult:
    """The census an exhaustive classification would produce, from closed forms."""
    rows = {
        kind: CensusRow(kind, row.count, row.weight) for kind, row in singular_table(q).items()
    }
    distribution = distribution or trace_distribution_formula(q)
    scale = q * gl3_order(q)
    smooth = {
        t: exact_int(scale * mass, f"smooth count at t = {t}")
        for t, mass in sorted(distribution.masses.items())
    }
    return CensusResult(q, rows, smooth)
