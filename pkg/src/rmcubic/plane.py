"""
Points and lines of the planes P^2(F_q) and A^2(F_q).

Projective points are normalised triples of element codes, sorted
lexicographically. Under the default first-nonzero convention the leading
non-zero coordinate is 1; the last-nonzero convention scales the trailing
one instead. Lines are stored by normalised coefficient triples together
with the indices of the points they contain.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from rmcubic.exceptions import FieldError
from rmcubic.ff import FieldSpec

Point = tuple[int, int, int]


class Convention(Enum):
    """
    Representative choice for projective points.

    Attributes:
        FIRST_NONZERO: Scale so the first non-zero coordinate is 1
        LAST_NONZERO: Scale so the last non-zero coordinate is 1
    """

    FIRST_NONZERO = "first_nonzero"
    LAST_NONZERO = "last_nonzero"


class LineKind(Enum):
    """
    Attributes:
        PROJECTIVE: a*x0 + b*x1 + c*x2 = 0 in P^2
        AFFINE: a*x + b*y + c = 0 in A^2 with (a, b) != (0, 0)
    """

    PROJECTIVE = "projective"
    AFFINE = "affine"


@dataclass(frozen=True)
class Line:
    """
    A rational line.

    Attributes:
        kind: Projective or affine
        coeffs: Normalised coefficients, first non-zero equal to 1
        points: Indices of the line's points in the matching point enumeration
    """

    kind: LineKind
    coeffs: tuple[int, int, int]
    points: tuple[int, ...]


def normalize_point(
    field: FieldSpec, coords: Sequence[int], convention: Convention = Convention.FIRST_NONZERO
) -> Point:
    """
    Scale a non-zero triple to its representative.

    Raises:
        FieldError: If every coordinate is zero
    """
    nonzero = [i for i, c in enumerate(coords) if c]
    if not nonzero:
        raise FieldError("(0, 0, 0) is not a projective point")
    pivot = nonzero[0] if convention is Convention.FIRST_NONZERO else nonzero[-1]
    scale = field.inv(coords[pivot])
    x0, x1, x2 = (field.mul(scale, c) for c in coords)
    return (x0, x1, x2)


def enumerate_projective_points(
    field: FieldSpec, convention: Convention = Convention.FIRST_NONZERO
) -> list[Point]:
    """All q^2 + q + 1 points of P^2(F_q), sorted."""
    q = field.q
    if convention is Convention.FIRST_NONZERO:
        points = [(1, a, b) for a, b in product(range(q), repeat=2)]
        points += [(0, 1, b) for b in range(q)]
        points.append((0, 0, 1))
    else:
        points = [(a, b, 1) for a, b in product(range(q), repeat=2)]
        points += [(a, 1, 0) for a in range(q)]
        points.append((1, 0, 0))
    return sorted(points)


def enumerate_affine_points(field: FieldSpec) -> list[tuple[int, int]]:
    """All q^2 points (x, y) of A^2(F_q) in row-major order."""
    return list(product(range(field.q), repeat=2))


def affine_representatives(field: FieldSpec, hyperplane: int = 2) -> list[Point]:
    """
    Points off the hyperplane x_h = 0, scaled so that x_h = 1.

    For h = 2 this is (x, y, 1) in the row-major order of
    ``enumerate_affine_points``.
    """
    if hyperplane not in (0, 1, 2):
        raise FieldError(f"hyperplane index must be 0, 1 or 2, got {hyperplane}")
    reps = []
    for a, b in product(range(field.q), repeat=2):
        coords = [a, b]
        coords.insert(hyperplane, 1)
        reps.append((coords[0], coords[1], coords[2]))
    return reps


def off_hyperplane(points: Sequence[Point], hyperplane: int) -> list[int]:
    """Indices of the points whose coordinate x_h is non-zero."""
    return [i for i, point in enumerate(points) if point[hyperplane]]


def _dot(field: FieldSpec, a: Sequence[int], b: Sequence[int]) -> int:
    acc = 0
    for x, y in zip(a, b):
        acc = field.add(acc, field.mul(x, y))
    return acc


def enumerate_lines(
    field: FieldSpec,
    kind: LineKind = LineKind.PROJECTIVE,
    convention: Convention = Convention.FIRST_NONZERO,
) -> list[Line]:
    """
    All rational lines with their incidences.

    Projective: q^2 + q + 1 lines, each with q + 1 points.
    Affine: q^2 + q lines, each with q points.
    """
    coefficient_triples = enumerate_projective_points(field, Convention.FIRST_NONZERO)
    lines = []
    if kind is LineKind.PROJECTIVE:
        points = enumerate_projective_points(field, convention)
        for coeffs in coefficient_triples:
            members = tuple(i for i, pt in enumerate(points) if _dot(field, coeffs, pt) == 0)
            lines.append(Line(kind, coeffs, members))
        return lines

    affine = enumerate_affine_points(field)
    for coeffs in coefficient_triples:
        if coeffs[0] == 0 and coeffs[1] == 0:
            continue
        members = tuple(i for i, (x, y) in enumerate(affine) if _dot(field, coeffs, (x, y, 1)) == 0)
        lines.append(Line(kind, coeffs, members))
    return lines


class PlaneGeometry:
    """
    Cached incidence data for P^2(F_q).

    Attributes:
        field: The base field
        convention: Point representative convention
        points: Sorted projective points
        lines: Projective lines in sorted coefficient order
    """

    def __init__(self, field: FieldSpec, convention: Convention = Convention.FIRST_NONZERO):
        self.field = field
        self.convention = convention
        self.points: list[Point] = enumerate_projective_points(field, convention)
        self.lines: list[Line] = enumerate_lines(field, LineKind.PROJECTIVE, convention)
        self._point_index = {pt: i for i, pt in enumerate(self.points)}
        self._line_index = {line.coeffs: i for i, line in enumerate(self.lines)}

    def point_index(self, coords: Sequence[int]) -> int:
        return self._point_index[normalize_point(self.field, coords, self.convention)]

    def line_index(self, coeffs: Sequence[int]) -> int:
        return self._line_index[normalize_point(self.field, coeffs, Convention.FIRST_NONZERO)]

    def line_basis(self, index: int) -> tuple[Point, Point]:
        """Two distinct points spanning a line."""
        members = self.lines[index].points
        return self.points[members[0]], self.points[members[1]]

    def other_point_on(self, index: int, point: Point) -> Point:
        """A point of the line distinct from ``point``."""
        for member in self.lines[index].points:
            if self.points[member] != point:
                return self.points[member]
        raise FieldError("line has a single point")  # pragma: no cover

    @cached_property
    def incidence(self) -> np.ndarray:
        """Boolean matrix, points by lines."""
        matrix = np.zeros((len(self.points), len(self.lines)), dtype=bool)
        for j, line in enumerate(self.lines):
            matrix[list(line.points), j] = True
        return matrix

    @cached_property
    def line_lookup(self) -> np.ndarray:
        """
        Line index of every coefficient triple, by code a*q^2 + b*q + c.

        The zero triple maps to -1.
        """
        q = self.field.q
        lookup = np.full(q**3, -1, dtype=np.int64)
        for j, line in enumerate(self.lines):
            a, b, c = line.coeffs
            for scale in range(1, q):
                code = (
                    self.field.mul(scale, a) * q * q
                    + self.field.mul(scale, b) * q
                    + self.field.mul(scale, c)
                )
                lookup[code] = j
        return lookup


@lru_cache(maxsize=32)
def plane_geometry(
    field: FieldSpec, convention: Convention = Convention.FIRST_NONZERO
) -> PlaneGeometry:
    return PlaneGeometry(field, convention)
