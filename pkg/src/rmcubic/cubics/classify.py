"""
Structural classification of single cubics.

The classifier factors out rational lines, locates rational singular
points and reads tangent cones, so it never relies on point-count
signatures alone. Conjugate line triples are confirmed by finding a
component over F_{q^3}, with arithmetic done in F_q[t] modulo a cubic, so
classification works at every q the field layer supports.

The exhaustive census in ``cubics.engine`` uses the cheaper (zeros,
singular points) signature instead, and the two are cross-checked in the
test-suite.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import structlog

from rmcubic.cubics.forms import Exponent, TernaryForm, binary_root_count
from rmcubic.cubics.models import (
    IRREDUCIBLE_SINGULAR_KINDS,
    MONOMIALS,
    AffineCubic,
    CodeSpec,
    CubicClass,
    CubicKind,
    CubicProfile,
    HomogeneousCubic,
)
from rmcubic.exceptions import (
    ClassificationError,
    NotSmoothError,
    OutOfScopeError,
    ReducibleCubicError,
)
from rmcubic.ff import FieldSpec, field_embedding
from rmcubic.plane import Point, PlaneGeometry, enumerate_projective_points, plane_geometry

logger = structlog.get_logger(__name__)


def _zero_points(form: TernaryForm, geometry: PlaneGeometry) -> list[int]:
    return [i for i, pt in enumerate(geometry.points) if form.evaluate(pt) == 0]


def _singular_points(
    form: TernaryForm, geometry: PlaneGeometry, zeros: Sequence[int]
) -> list[Point]:
    partials = [form.partial(j) for j in range(3)]
    singular = []
    for i in zeros:
        pt = geometry.points[i]
        if all(d.evaluate(pt) == 0 for d in partials):
            singular.append(pt)
    return singular


def _contained_lines(form: TernaryForm, geometry: PlaneGeometry) -> list[int]:
    contained = []
    for index in range(len(geometry.lines)):
        p, q = geometry.line_basis(index)
        if not any(form.restrict(p, q)):
            contained.append(index)
    return contained


def _complete_basis(point: Point) -> list[list[int]]:
    """Columns (e_a, e_b, point) forming an invertible matrix."""
    units = ([1, 0, 0], [0, 1, 0], [0, 0, 1])
    pivot = max(i for i in range(3) if point[i])
    a, b = (units[i] for i in range(3) if i != pivot)
    return [[a[r], b[r], point[r]] for r in range(3)]


def point_count(cubic: HomogeneousCubic, k: int = 1) -> int:
    """
    Number of points of P^2(F_{q^k}) on the cubic.

    The coefficients are pushed through the embedding F_q -> F_{q^k} and
    the form is evaluated on every point of the extension plane with
    numpy table lookups.

    Raises:
        FieldError: If q^k is beyond the arithmetic table range
    """
    if k == 1:
        return len(_zero_points(cubic.form, plane_geometry(cubic.field)))
    embedding = field_embedding(cubic.field, k)
    big = embedding.target
    pts = np.array(enumerate_projective_points(big), dtype=np.int64)
    add, mul = big.add_table, big.mul_table
    cols = [pts[:, i] for i in range(3)]
    powers = []
    for col in cols:
        square = mul[col, col]
        powers.append([np.ones_like(col), col, square, mul[square, col]])
    total = np.zeros(len(pts), dtype=np.int64)
    for (a, b, c), coeff in cubic.form.terms:
        mono = mul[mul[powers[0][a], powers[1][b]], powers[2][c]]
        total = add[total, mul[embedding(coeff), mono]]
    return int(np.count_nonzero(total == 0))


_Cubic3 = tuple[int, int, int]


@dataclass(frozen=True)
class _CubicExtension:
    """
    F_q[t]/(m) for a monic cubic m = t^3 + low[2] t^2 + low[1] t + low[0].

    Elements are coefficient triples (c0, c1, c2) of c0 + c1 t + c2 t^2.
    When m has no root in F_q this is F_{q^3}, reached without tables.
    """

    field: FieldSpec
    low: _Cubic3

    def embed(self, c: int) -> _Cubic3:
        return (c, 0, 0)

    def add(self, a: _Cubic3, b: _Cubic3) -> _Cubic3:
        f = self.field
        return (f.add(a[0], b[0]), f.add(a[1], b[1]), f.add(a[2], b[2]))

    def neg(self, a: _Cubic3) -> _Cubic3:
        f = self.field
        return (f.neg(a[0]), f.neg(a[1]), f.neg(a[2]))

    def mul(self, a: _Cubic3, b: _Cubic3) -> _Cubic3:
        f = self.field
        acc = [0] * 5
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    acc[i + j] = f.add(acc[i + j], f.mul(x, y))
        # t^3 = -(low[0] + low[1] t + low[2] t^2)
        for degree in (4, 3):
            c, acc[degree] = acc[degree], 0
            for i in range(3):
                acc[degree - 3 + i] = f.sub(acc[degree - 3 + i], f.mul(c, self.low[i]))
        return (acc[0], acc[1], acc[2])

    def evaluate(self, form: TernaryForm, point: Sequence[_Cubic3]) -> _Cubic3:
        acc = self.embed(0)
        for exponent, coeff in form.terms:
            term = self.embed(coeff)
            for x, n in zip(point, exponent):
                for _ in range(n):
                    term = self.mul(term, x)
            acc = self.add(acc, term)
        return acc


def _confirm_concurrent_triple(cubic: HomogeneousCubic, moved: TernaryForm) -> None:
    """
    With the triple point moved to (0:0:1) the form must be a binary cubic
    in y0, y1 without rational roots.
    """
    stray = [e for e, _ in moved.terms if e[2]]
    binary = tuple(moved.coefficient((3 - r, r, 0)) for r in range(4))
    if stray or binary_root_count(cubic.field, binary):
        raise ClassificationError(
            f"cubic {cubic.coeffs} is not three conjugate lines through a rational point"
        )


def _confirm_nonconcurrent_triple(cubic: HomogeneousCubic) -> None:
    """
    Check that the curve contains its tangent line at a point over F_{q^3}.

    The line x2 = 0 meets the curve in three conjugate points; P = (1 : t : 0)
    is one of them, with t a root of the restricted cubic. The tangent at P
    is the conjugate component through P, so the form must vanish at four
    distinct points of it.
    """
    f = cubic.field
    form = cubic.form
    coeffs = form.restrict((1, 0, 0), (0, 1, 0))
    if coeffs[3] == 0 or binary_root_count(f, coeffs):
        raise ClassificationError(f"cubic {cubic.coeffs} meets x2 = 0 in a rational point")
    inv = f.inv(coeffs[3])
    ext = _CubicExtension(f, (f.mul(coeffs[0], inv), f.mul(coeffs[1], inv), f.mul(coeffs[2], inv)))
    zero, t = ext.embed(0), (0, 1, 0)
    point = (ext.embed(1), t, zero)
    gradient = [ext.evaluate(form.partial(j), point) for j in range(3)]
    k = next((j for j in range(3) if any(gradient[j])), None)
    if any(ext.evaluate(form, point)) or k is None:
        raise ClassificationError(f"cubic {cubic.coeffs} is singular off the rational points")
    i, j = (m for m in range(3) if m != k)
    r1, r2 = [zero, zero, zero], [zero, zero, zero]
    r1[i], r1[k] = gradient[k], ext.neg(gradient[i])
    r2[j], r2[k] = gradient[k], ext.neg(gradient[j])
    samples = (
        r1,
        r2,
        [ext.add(a, b) for a, b in zip(r1, r2)],
        [ext.add(a, ext.mul(t, b)) for a, b in zip(r1, r2)],
    )
    if any(any(ext.evaluate(form, pt)) for pt in samples):
        raise ClassificationError(
            f"cubic {cubic.coeffs} does not contain its tangent at a conjugate point"
        )


def _classify(cubic: HomogeneousCubic, geometry: PlaneGeometry) -> tuple[CubicClass, list[int]]:
    field = cubic.field
    form = cubic.form
    zeros = _zero_points(form, geometry)
    if cubic.is_zero():
        return CubicClass(CubicKind.ZERO), zeros

    lines = _contained_lines(form, geometry)
    if len(lines) == 3:
        common = geometry.incidence[:, lines].all(axis=1).any()
        kind = CubicKind.CONCURRENT_RATIONAL if common else CubicKind.NONCONCURRENT_RATIONAL
        return CubicClass(kind), zeros
    if len(lines) == 2:
        return CubicClass(CubicKind.LINE_DOUBLE_LINE), zeros
    if len(lines) == 1:
        line = geometry.lines[lines[0]]
        conic = form.divide_by_linear(line.coeffs)
        p, q = geometry.line_basis(lines[0])
        on_line = conic.restrict(p, q, degree=2)
        if not any(on_line):
            return CubicClass(CubicKind.TRIPLE_LINE), zeros
        conic_zeros = _zero_points(conic, geometry)
        vertices = _singular_points(conic, geometry, conic_zeros)
        if vertices:
            vertex_index = geometry.point_index(vertices[0])
            if vertex_index in line.points:
                return CubicClass(CubicKind.CONCURRENT_RATIONAL_PAIR), zeros
            return CubicClass(CubicKind.NONCONCURRENT_RATIONAL_PAIR), zeros
        roots = binary_root_count(field, on_line)
        kind = {
            1: CubicKind.CONIC_TANGENT_LINE,
            2: CubicKind.CONIC_SECANT_RATIONAL,
            0: CubicKind.CONIC_SECANT_CONJUGATE,
        }[roots]
        return CubicClass(kind), zeros
    if len(lines) > 3:
        raise ClassificationError(f"cubic {cubic.coeffs} contains {len(lines)} lines")

    singular = _singular_points(form, geometry, zeros)
    if len(singular) == 1:
        moved = form.compose(_complete_basis(singular[0]))
        cone = (
            moved.coefficient((2, 0, 1)),
            moved.coefficient((1, 1, 1)),
            moved.coefficient((0, 2, 1)),
        )
        if not any(cone):
            _confirm_concurrent_triple(cubic, moved)
            return CubicClass(CubicKind.CONCURRENT_CONJUGATE_TRIPLE), zeros
        roots = binary_root_count(field, cone)
        kind = {1: CubicKind.CUSP, 2: CubicKind.SPLIT_NODE, 0: CubicKind.NONSPLIT_NODE}[roots]
        return CubicClass(kind), zeros
    if singular:
        raise ClassificationError(
            f"cubic {cubic.coeffs} has {len(singular)} rational singular points and no line"
        )

    if not zeros:
        _confirm_nonconcurrent_triple(cubic)
        return CubicClass(CubicKind.NONCONCURRENT_CONJUGATE_TRIPLE), zeros
    trace = field.q + 1 - len(zeros)
    if trace * trace > 4 * field.q:
        raise ClassificationError(f"smooth cubic {cubic.coeffs} violates the Hasse bound")
    return CubicClass(CubicKind.SMOOTH, trace), zeros


def classify(cubic: HomogeneousCubic) -> CubicClass:
    """
    Determine the geometric type of a cubic.

    Raises:
        ClassificationError: If the cubic fits no type (a bug signal)
    """
    cubic_class, _ = _classify(cubic, plane_geometry(cubic.field))
    return cubic_class


def codeword_weight(cubic: Union[HomogeneousCubic, AffineCubic], spec: CodeSpec) -> int:
    """Number of evaluation points of ``spec`` where the cubic is non-zero."""
    form = cubic.homogenize().form if isinstance(cubic, AffineCubic) else cubic.form
    if form.field != spec.field:
        raise ClassificationError("cubic and code are over different fields")
    return sum(1 for pt in spec.points if form.evaluate(pt) != 0)


def _line_counts(zeros: Sequence[int], geometry: PlaneGeometry) -> np.ndarray:
    mask = np.zeros(len(geometry.points), dtype=np.int64)
    mask[list(zeros)] = 1
    return mask @ geometry.incidence.astype(np.int64)


def _flex_count(
    cubic: HomogeneousCubic, geometry: PlaneGeometry, zeros: Sequence[int], skip: Optional[Point]
) -> int:
    form = cubic.form
    flexes = 0
    for i in zeros:
        pt = geometry.points[i]
        if pt == skip:
            continue
        gradient = form.gradient(pt)
        if not any(gradient):
            continue
        tangent = geometry.line_index(gradient)
        other = geometry.other_point_on(tangent, pt)
        # Along the tangent, P has multiplicity >= 2; a flex has multiplicity 3
        if form.restrict(pt, other)[2] == 0:
            flexes += 1
    return flexes


def inflection_count(cubic: HomogeneousCubic) -> int:
    """
    Number of rational inflection points of a smooth cubic.

    The count is always 0, 1, 3 or 9.

    Raises:
        NotSmoothError: If the cubic is singular
    """
    geometry = plane_geometry(cubic.field)
    cubic_class, zeros = _classify(cubic, geometry)
    if cubic_class.kind is not CubicKind.SMOOTH:
        raise NotSmoothError(f"cubic is {cubic_class}, not smooth")
    return _flex_count(cubic, geometry, zeros, None)


# Moving a rational point of the curve to (0:0:1) leaves
# F = A1 y2^2 + A2 y2 + A3 with binary forms A1, A2, A3 in y0, y1.
PROJECTION_EXPONENTS: tuple[Exponent, ...] = (
    (1, 0, 2),
    (0, 1, 2),
    (2, 0, 1),
    (1, 1, 1),
    (0, 2, 1),
    (3, 0, 0),
    (2, 1, 0),
    (1, 2, 0),
    (0, 3, 0),
)


def projection_matrix(field: FieldSpec, points: Sequence[Point]) -> np.ndarray:
    """
    Linear maps from cubic coefficients to projected coefficients.

    Entry [i, m, k] is the coefficient of PROJECTION_EXPONENTS[k] in
    MONOMIALS[m] after points[i] is moved to (0:0:1), so the projected
    coefficients of a cubic through points[i] are its coefficient vector
    times matrix[i].
    """
    matrix = np.zeros((len(points), len(MONOMIALS), len(PROJECTION_EXPONENTS)), dtype=np.int64)
    for i, point in enumerate(points):
        basis = _complete_basis(point)
        for m, exponent in enumerate(MONOMIALS):
            moved = TernaryForm.from_dict(field, {exponent: 1}).compose(basis)
            matrix[i, m] = [moved.coefficient(e) for e in PROJECTION_EXPONENTS]
    return matrix


def project(field: FieldSpec, coeffs: np.ndarray, maps: np.ndarray) -> np.ndarray:
    """
    Projected coefficients of many cubics at once.

    Args:
        field: Coefficient field
        coeffs: Shape (R, 10) cubic coefficient codes
        maps: Shape (R, 10, 9) rows of a projection_matrix, one per cubic
    """
    projected = np.zeros((coeffs.shape[0], len(PROJECTION_EXPONENTS)), dtype=field.code_dtype)
    for m in range(len(MONOMIALS)):
        term = field.mul_arrays(coeffs[:, m : m + 1], maps[:, m, :])
        projected = field.add_arrays(projected, term)
    return projected


def j_invariants(field: FieldSpec, projected: np.ndarray) -> np.ndarray:
    """
    j-invariants of smooth cubics from their projected coefficients.

    Projecting from the moved point gives the double cover
    w^2 = A2^2 - 4 A1 A3, a binary quartic a s^4 + b s^3 u + ... + e u^4
    with invariants I = 12ae - 3bd + c^2 and
    J = 72ace + 9bcd - 27ad^2 - 27eb^2 - 2c^3; then
    j = 6912 I^3 / (4 I^3 - J^2). Needs characteristic at least 5.

    Raises:
        ClassificationError: If some quartic has a repeated root
    """
    f = field
    add, mul = f.add_arrays, f.mul_arrays
    p = f.p

    def sub(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return add(x, f.neg_array(y))

    def times(n: int, x: np.ndarray) -> np.ndarray:
        # Integers are prime-subfield codes
        return mul(n % p, x)

    al0, al1, be0, be1, be2, ga0, ga1, ga2, ga3 = (
        projected[:, k].astype(np.int64) for k in range(len(PROJECTION_EXPONENTS))
    )
    a = sub(mul(be0, be0), times(4, mul(al0, ga0)))
    b = sub(times(2, mul(be0, be1)), times(4, add(mul(al0, ga1), mul(al1, ga0))))
    c = sub(
        add(mul(be1, be1), times(2, mul(be0, be2))),
        times(4, add(mul(al0, ga2), mul(al1, ga1))),
    )
    d = sub(times(2, mul(be1, be2)), times(4, add(mul(al0, ga3), mul(al1, ga2))))
    e = sub(mul(be2, be2), times(4, mul(al1, ga3)))

    inv_i = add(sub(times(12, mul(a, e)), times(3, mul(b, d))), mul(c, c))
    inv_j = sub(
        add(times(72, mul(mul(a, c), e)), times(9, mul(mul(b, c), d))),
        add(
            add(times(27, mul(a, mul(d, d))), times(27, mul(e, mul(b, b)))),
            times(2, mul(c, mul(c, c))),
        ),
    )
    cube = mul(inv_i, mul(inv_i, inv_i))
    denominator = sub(times(4, cube), mul(inv_j, inv_j))
    if (denominator == 0).any():
        row = int(np.argmax(denominator == 0))
        raise ClassificationError(f"projected quartic {projected[row].tolist()} is singular")
    return mul(times(6912, cube), f.inv_array(denominator))


def j_invariant(cubic: HomogeneousCubic) -> int:
    """
    j-invariant (an element code) of a smooth cubic, via projection from
    its first rational point.

    Raises:
        OutOfScopeError: In characteristic 2 or 3 (reason ``char-below-5``)
        NotSmoothError: If the cubic is singular
    """
    field = cubic.field
    if field.p < 5:
        raise OutOfScopeError(
            f"j-invariants of plane cubics need characteristic >= 5, got {field.p}",
            reason="char-below-5",
        )
    geometry = plane_geometry(field)
    cubic_class, zeros = _classify(cubic, geometry)
    if cubic_class.kind is not CubicKind.SMOOTH:
        raise NotSmoothError(f"cubic is {cubic_class}, not smooth")
    maps = projection_matrix(field, [geometry.points[zeros[0]]])
    projected = project(field, np.array([cubic.coeffs], dtype=np.int64), maps)
    return int(j_invariants(field, projected)[0])


def line_profile(cubic: HomogeneousCubic) -> tuple[int, int, int, int]:
    """
    (L0, L1, L2, L3): rational lines meeting the curve in 0..3 rational points.

    Raises:
        ReducibleCubicError: If the cubic is not absolutely irreducible
    """
    geometry = plane_geometry(cubic.field)
    cubic_class, zeros = _classify(cubic, geometry)
    if not cubic_class.kind.is_absolutely_irreducible:
        raise ReducibleCubicError(f"cubic is {cubic_class}, not absolutely irreducible")
    return _profile_from_counts(_line_counts(zeros, geometry))


def _profile_from_counts(counts: np.ndarray) -> tuple[int, int, int, int]:
    l0, l1, l2, l3 = (int(np.count_nonzero(counts == i)) for i in range(4))
    if l0 + l1 + l2 + l3 != len(counts):
        raise ClassificationError("a line meets an irreducible cubic in more than 3 points")
    return (l0, l1, l2, l3)


def profile(cubic: HomogeneousCubic) -> CubicProfile:
    """Classification, projective weight and, for irreducible cubics, flex and line statistics."""
    geometry = plane_geometry(cubic.field)
    cubic_class, zeros = _classify(cubic, geometry)
    weight = len(geometry.points) - len(zeros)
    if not cubic_class.kind.is_absolutely_irreducible:
        return CubicProfile(cubic_class, weight)
    skip = None
    if cubic_class.kind in IRREDUCIBLE_SINGULAR_KINDS:
        skip = _singular_points(cubic.form, geometry, zeros)[0]
    return CubicProfile(
        cubic_class,
        weight,
        inflections=_flex_count(cubic, geometry, zeros, skip),
        line_profile=_profile_from_counts(_line_counts(zeros, geometry)),
    )


def classify_all(cubics: Sequence[HomogeneousCubic]) -> dict[CubicKind, int]:
    """Histogram of kinds over a collection of cubics."""
    histogram: dict[CubicKind, int] = {}
    for cubic in cubics:
        kind = classify(cubic).kind
        histogram[kind] = histogram.get(kind, 0) + 1
    return histogram
