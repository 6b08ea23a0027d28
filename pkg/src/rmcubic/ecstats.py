"""
Distribution of Frobenius traces of elliptic curves over F_q.

Every class is weighted by 1/#Aut, normalised to total mass 1. The closed
forms come from Hurwitz class numbers; the brute-force routes count short
Weierstrass models y^2 = x^3 + a x + b, whose isomorphism classes carry
exactly these weights, and are available for p >= 5.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import Optional

import numpy as np
import structlog

from rmcubic.arithfun import hurwitz, kronecker, tau
from rmcubic.exceptions import BudgetExceededError, InvalidArgumentError, OutOfScopeError
from rmcubic.ff import FieldSpec, field_for_order

logger = structlog.get_logger(__name__)

BRUTEFORCE_MAX_ORDER = 200


class TorsionShape(Enum):
    """
    Structure of the rational 3-torsion E(F_q)[3].

    Attributes:
        TRIVIAL: No point of order 3
        Z3: Cyclic of order 3
        Z3XZ3: Full 3-torsion
    """

    TRIVIAL = "trivial"
    Z3 = "z3"
    Z3XZ3 = "z3xz3"


@dataclass
class TraceDistribution:
    """
    Masses P_q(t) by Frobenius trace.

    Attributes:
        q: Field order
        masses: t -> P_q(t), only non-zero entries
        full_torsion: t -> mass of classes with E(F_q)[3] = Z/3 x Z/3, when known
    """

    q: int
    masses: dict[int, Fraction]
    full_torsion: Optional[dict[int, Fraction]] = None
    cyclic_torsion: Optional[dict[int, Fraction]] = field(default=None, repr=False)

    def mass(self, t: int) -> Fraction:
        return self.masses.get(t, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))

    def moment(self, k: int) -> Fraction:
        return sum((m * t**k for t, m in self.masses.items()), Fraction(0))

    def to_document(self) -> dict[str, object]:
        doc: dict[str, object] = {
            "q": str(self.q),
            "masses": {str(t): _render(m) for t, m in sorted(self.masses.items())},
        }
        if self.full_torsion is not None:
            doc["full_torsion"] = {str(t): _render(m) for t, m in sorted(self.full_torsion.items())}
        return doc


def _render(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _split(q: int) -> tuple[int, int]:
    spec = field_for_order(q)
    return spec.p, spec.v


def _trace_range(q: int) -> range:
    bound = isqrt(4 * q)
    return range(-bound, bound + 1)


def trace_distribution_formula(q: int) -> TraceDistribution:
    """
    P_q(t) for every trace from Hurwitz class numbers.

    Ordinary traces (p does not divide t) get H(t^2 - 4q) / (2q); the
    supersingular traces follow the characteristic and whether q is a
    square. Masses sum to 1.

    Example:
        >>> trace_distribution_formula(5).mass(0)
        Fraction(1, 5)
    """
    p, v = _split(q)
    square = v % 2 == 0
    masses: dict[int, Fraction] = {}
    for t in _trace_range(q):
        t2 = t * t
        if t2 < 4 * q and t % p:
            mass = hurwitz(t2 - 4 * q) / (2 * q)
        elif not square:
            if t == 0:
                mass = hurwitz(-4 * p) / (2 * q)
            elif t2 == 2 * q and p == 2:
                mass = Fraction(1, 4 * q)
            elif t2 == 3 * q and p == 3:
                mass = Fraction(1, 6 * q)
            else:
                mass = Fraction(0)
        else:
            if t == 0:
                mass = Fraction(1 - kronecker(-4, p), 4 * q)
            elif t2 == q:
                mass = Fraction(1 - kronecker(-3, p), 6 * q)
            elif t2 == 4 * q:
                mass = Fraction(p - 1, 24 * q)
            else:
                mass = Fraction(0)
        if mass:
            masses[t] = mass
    return TraceDistribution(q, masses)


def torsion33_distribution_formula(q: int) -> dict[int, Fraction]:
    """
    Mass of classes with trace t and full rational 3-torsion.

    Non-zero only when q = 1 mod 3 (ordinary traces t = q + 1 mod 9) or,
    for square q prime to 3, at t = 2 sqrt(q) when sqrt(q) = 1 mod 3 and
    t = -2 sqrt(q) when sqrt(q) = -1 mod 3.
    """
    p, v = _split(q)
    masses: dict[int, Fraction] = {}
    if q % 3 == 1:
        for t in _trace_range(q):
            if t % p and (t - q - 1) % 9 == 0 and t * t < 4 * q:
                mass = hurwitz((t * t - 4 * q) // 9) / (2 * q)
                if mass:
                    masses[t] = mass
    if v % 2 == 0 and p != 3:
        root = isqrt(q)
        if root % 3 == 1:
            masses[2 * root] = Fraction(p - 1, 24 * q)
        elif root % 3 == 2:
            masses[-2 * root] = Fraction(p - 1, 24 * q)
    return dict(sorted(masses.items()))


def _curve_counts(
    spec: FieldSpec, a: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Trace, 3-torsion size, j-invariant and non-singularity of each model with this a."""
    q = spec.q
    x = np.arange(q)
    add, mul = spec.add_arrays, spec.mul_arrays
    chi = spec.quadratic_character

    def const(n: int) -> int:
        return n % spec.p

    x2 = mul(x, x)
    x3 = mul(x2, x)
    ax = mul(a, x)
    base = add(x3, ax)  # x^3 + a x
    b = np.arange(q)[:, None]
    values = add(base[None, :], b)  # (b, x)
    trace = -chi[values].sum(axis=1)

    # 3-division polynomial 3x^4 + 6a x^2 + 12 b x - a^2
    x4 = mul(x2, x2)
    partial = add(mul(const(3), x4), mul(mul(const(6), a), x2))
    partial = add(partial, spec.neg_array(np.full(q, mul(a, a))))
    psi = add(partial[None, :], mul(mul(const(12), b), x[None, :]))
    roots = psi == 0
    torsion = 1 + (roots * (2 * (chi[values] == 1) + (values == 0))).sum(axis=1)

    # 4a^3 + 27b^2 != 0
    a3 = mul(mul(a, a), a)
    disc = add(np.full(q, mul(const(4), a3)), mul(const(27), mul(b[:, 0], b[:, 0])))
    # j = 1728 * 4a^3 / (4a^3 + 27b^2)
    j = mul(np.full(q, mul(const(6912), a3)), spec.inv_array(disc))
    return trace, torsion, j, disc != 0


def _weierstrass_census(q: int, threads: int = 1) -> dict[tuple[int, int, int], int]:
    """Number of non-singular models y^2 = x^3 + a x + b per (trace, #E[3], j)."""
    p, _ = _split(q)
    if p < 5:
        raise OutOfScopeError(
            f"short Weierstrass models do not cover characteristic {p}",
            reason="char-below-5",
        )
    if q > BRUTEFORCE_MAX_ORDER:
        raise BudgetExceededError(
            f"brute-force trace census supports q <= {BRUTEFORCE_MAX_ORDER}, got {q}"
        )
    spec = field_for_order(q)

    def work(a: int) -> dict[tuple[int, int, int], int]:
        trace, torsion, j, smooth = _curve_counts(spec, a)
        counts: dict[tuple[int, int, int], int] = {}
        for key in zip(trace[smooth].tolist(), torsion[smooth].tolist(), j[smooth].tolist()):
            counts[key] = counts.get(key, 0) + 1
        return counts

    with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="rmcubic-curves") as pool:
        partials = list(pool.map(work, range(q)))
    merged: dict[tuple[int, int, int], int] = {}
    for part in partials:
        for key, count in part.items():
            merged[key] = merged.get(key, 0) + count
    return merged


def trace_distribution_bruteforce(q: int, threads: int = 1) -> TraceDistribution:
    """
    P_q(t) and the 3-torsion split by counting all q^2 - q Weierstrass models.

    Raises:
        OutOfScopeError: For characteristic 2 or 3
        BudgetExceededError: For q above 200
    """
    census = _weierstrass_census(q, threads)
    curves = q * q - q
    masses: dict[int, Fraction] = {}
    full: dict[int, Fraction] = {}
    cyclic: dict[int, Fraction] = {}
    for (t, n3, _), count in sorted(census.items()):
        share = Fraction(count, curves)
        masses[t] = masses.get(t, Fraction(0)) + share
        if n3 == 9:
            full[t] = full.get(t, Fraction(0)) + share
        elif n3 == 3:
            cyclic[t] = cyclic.get(t, Fraction(0)) + share
    logger.debug("Weierstrass census finished", q=q, curves=curves, traces=len(masses))
    return TraceDistribution(q, masses, full_torsion=full, cyclic_torsion=cyclic)


def class_weights_bruteforce(q: int, threads: int = 1) -> dict[tuple[int, int, int], Fraction]:
    """
    Sum of 1/#Aut(E) over the classes E with a given (j, trace, #E(F_q)[3]).

    j is an element code of F_q. A class with automorphism group Aut(E)
    has (q - 1)/#Aut(E) short Weierstrass models, so each model weighs
    1/(q - 1). The weights add up to q.

    Raises:
        OutOfScopeError: For characteristic 2 or 3
        BudgetExceededError: For q above 200
    """
    census = _weierstrass_census(q, threads)
    weights: dict[tuple[int, int, int], Fraction] = {}
    for (t, n3, j), count in sorted(census.items()):
        weights[(j, t, n3)] = weights.get((j, t, n3), Fraction(0)) + Fraction(count, q - 1)
    return dict(sorted(weights.items()))


def moments(q: int, r: int, distribution: Optional[TraceDistribution] = None) -> Fraction:
    """
    Even moment E_q(t^{2r}).

    Raises:
        InvalidArgumentError: If r is negative or 2r > 10
    """
    if not 0 <= 2 * r <= 10:
        raise InvalidArgumentError(f"moments are provided for 0 <= 2r <= 10, got r = {r}")
    distribution = distribution or trace_distribution_formula(q)
    return distribution.moment(2 * r)


def moment_polynomial(p: int, r: int) -> int:
    """
    p * E_p(t^{2r}) for a prime p, from the classical trace-moment evaluations.

    The r = 5 value involves tau(p).
    """
    rows = {
        0: p,
        1: p**2 - 1,
        2: 2 * p**3 - 3 * p - 1,
        3: 5 * p**4 - 9 * p**2 - 5 * p - 1,
        4: 14 * p**5 - 28 * p**3 - 20 * p**2 - 7 * p - 1,
    }
    if r in rows:
        return rows[r]
    if r == 5:
        return 42 * p**6 - 90 * p**4 - 75 * p**3 - 35 * p**2 - 9 * p - 1 - tau(p)
    raise InvalidArgumentError(f"moment polynomials cover r = 0..5, got {r}")


def torsion_restricted_moments(
    q: int, r: int, shape: TorsionShape, distribution: Optional[TraceDistribution] = None
) -> Fraction:
    """
    q times the r-th trace moment over classes whose 3-torsion contains ``shape``.

    For Z3 the sum runs over all classes with 3 | q + 1 - t; for Z3XZ3 over
    the full-torsion masses.

    Raises:
        InvalidArgumentError: If r < 0 or shape is TRIVIAL
    """
    if r < 0:
        raise InvalidArgumentError(f"moment order must be non-negative, got {r}")
    if shape is TorsionShape.Z3:
        masses = (distribution or trace_distribution_formula(q)).masses
        selected = {t: m for t, m in masses.items() if (q + 1 - t) % 3 == 0}
    elif shape is TorsionShape.Z3XZ3:
        if distribution is not None and distribution.full_torsion is not None:
            selected = distribution.full_torsion
        else:
            selected = torsion33_distribution_formula(q)
    else:
        raise InvalidArgumentError("restricted moments need Z3 or Z3XZ3")
    return q * sum((m * t**r for t, m in selected.items()), Fraction(0))
