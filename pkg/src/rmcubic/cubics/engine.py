"""
Exhaustive enumeration of cubic codewords.

Messages are split into a head (leading coefficients) and a tail. The
tail span is tabulated once as a (rows, columns) array of element codes;
for every head the engine computes the head's contribution h and compares
the whole table against -h, since h + t vanishes exactly where t = -h.
This keeps the inner loop to one vectorised comparison per head and needs
no field arithmetic on the big table.

Heads are grouped into partitions by their first two coefficients and the
partitions run on a thread pool. Partition results are merged in
partition order, so output is independent of scheduling.
"""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional, TypeVar

import numpy as np
import structlog

from rmcubic.config import CodeVariant, EngineConfig
from rmcubic.cubics.classify import j_invariants, project, projection_matrix
from rmcubic.cubics.forms import TernaryForm
from rmcubic.cubics.models import MONOMIALS, SINGULAR_KINDS, CodeSpec, CubicKind
from rmcubic.exceptions import BudgetExceededError, ClassificationError, ConfigurationError
from rmcubic.ff import FieldSpec
from rmcubic.metrics import MetricsCollector, NoOpMetricsCollector
from rmcubic.models import WeightEnumerator
from rmcubic.plane import plane_geometry

logger = structlog.get_logger(__name__)

R = TypeVar("R")

KIND_ORDER: tuple[CubicKind, ...] = SINGULAR_KINDS + (CubicKind.SMOOTH,)
_KIND_CODE = {kind: i for i, kind in enumerate(KIND_ORDER)}
_SMOOTH = _KIND_CODE[CubicKind.SMOOTH]
_UNKNOWN = -1
_AMBIGUOUS_Q1 = -2  # cusp or line through the vertex of a conjugate pair
_AMBIGUOUS_Q2 = -3  # non-split node or line missing the vertex of a conjugate pair

_PROFILED = np.array(
    [
        _KIND_CODE[k]
        for k in (CubicKind.SMOOTH, CubicKind.CUSP, CubicKind.SPLIT_NODE, CubicKind.NONSPLIT_NODE)
    ]
)

ProfileKey = tuple[CubicKind, int]
ProfileValue = tuple[int, tuple[int, int, int, int]]
ClassKey = tuple[int, int]


def census_signatures(q: int) -> dict[CubicKind, tuple[int, int]]:
    """
    (rational zeros, rational singular points) of every singular kind.

    The pairs (q + 1, 1) and (q + 2, 1) are shared by an irreducible kind
    and a kind containing a rational line.
    """
    n = q * q + q + 1
    return {
        CubicKind.ZERO: (n, n),
        CubicKind.TRIPLE_LINE: (q + 1, q + 1),
        CubicKind.LINE_DOUBLE_LINE: (2 * q + 1, q + 1),
        CubicKind.CONCURRENT_RATIONAL: (3 * q + 1, 1),
        CubicKind.CONCURRENT_RATIONAL_PAIR: (q + 1, 1),
        CubicKind.CONCURRENT_CONJUGATE_TRIPLE: (1, 1),
        CubicKind.NONCONCURRENT_RATIONAL: (3 * q, 3),
        CubicKind.NONCONCURRENT_RATIONAL_PAIR: (q + 2, 1),
        CubicKind.NONCONCURRENT_CONJUGATE_TRIPLE: (0, 0),
        CubicKind.CONIC_TANGENT_LINE: (2 * q + 1, 1),
        CubicKind.CONIC_SECANT_RATIONAL: (2 * q, 2),
        CubicKind.CONIC_SECANT_CONJUGATE: (2 * q + 2, 0),
        CubicKind.CUSP: (q + 1, 1),
        CubicKind.SPLIT_NODE: (q, 1),
        CubicKind.NONSPLIT_NODE: (q + 2, 1),
    }


def _signature_lookup(q: int) -> np.ndarray:
    n = q * q + q + 1
    lookup = np.full((n + 1) * (n + 1), _UNKNOWN, dtype=np.int64)
    ambiguous = {(q + 1, 1): _AMBIGUOUS_Q1, (q + 2, 1): _AMBIGUOUS_Q2}
    for z in range(1, n + 1):
        if z != 2 * q + 2:
            lookup[z * (n + 1)] = _SMOOTH
    for kind, (z, s) in census_signatures(q).items():
        key = z * (n + 1) + s
        if (z, s) in ambiguous:
            lookup[key] = ambiguous[(z, s)]
            continue
        if lookup[key] not in (_UNKNOWN, _SMOOTH):
            raise ClassificationError(f"signature {(z, s)} is not unique at q = {q}")
        lookup[key] = _KIND_CODE[kind]
    return lookup


@dataclass
class CensusRow:
    """
    Attributes:
        kind: Singular kind
        count: Number of cubic forms of this kind
        weight: Common projective codeword weight of those forms
    """

    kind: CubicKind
    count: int
    weight: int


@dataclass
class CensusResult:
    """
    Exhaustive classification of all q^10 cubic forms.

    Attributes:
        q: Field order
        rows: One row per singular kind, in SINGULAR_KINDS order
        smooth_by_trace: Number of smooth forms per Frobenius trace
        profiles: Optional (kind, trace) -> {(flexes, line profile): count}
            for smooth and irreducible singular forms
        smooth_classes: Optional (j-invariant code, trace) -> {flexes: count}
            for smooth forms; collected with profiles in characteristic >= 5
    """

    q: int
    rows: dict[CubicKind, CensusRow]
    smooth_by_trace: dict[int, int]
    profiles: Optional[dict[ProfileKey, dict[ProfileValue, int]]] = None
    smooth_classes: Optional[dict[ClassKey, dict[int, int]]] = None

    def as_table(self) -> dict[CubicKind, tuple[int, int]]:
        return {kind: (row.count, row.weight) for kind, row in self.rows.items()}

    def total(self) -> int:
        return sum(row.count for row in self.rows.values()) + sum(self.smooth_by_trace.values())

    def to_document(self) -> dict[str, object]:
        return {
            "q": str(self.q),
            "rows": [
                {"kind": r.kind.value, "count": str(r.count), "weight": str(r.weight)}
                for r in self.rows.values()
            ],
            "smooth": [
                {"trace": str(t), "count": str(c)} for t, c in sorted(self.smooth_by_trace.items())
            ],
        }

    def to_rows(self) -> list[list[str]]:
        rows = [["kind", "count", "weight"]]
        rows += [[r.kind.value, str(r.count), str(r.weight)] for r in self.rows.values()]
        rows.append(["smooth", str(sum(self.smooth_by_trace.values())), "mixed"])
        return rows


@dataclass
class _CensusPartial:
    kinds: np.ndarray
    weights: np.ndarray
    traces: np.ndarray
    profiles: dict[tuple[int, ...], int] = field(default_factory=dict)


def derivative_matrix(spec: CodeSpec, j: int) -> np.ndarray:
    """Values of d/dx_j of every monomial at the evaluation points, shape (10, N)."""
    f = spec.field
    matrix = np.zeros((len(MONOMIALS), spec.length), dtype=f.code_dtype)
    for i, exponent in enumerate(MONOMIALS):
        if exponent[j] % f.p == 0:
            continue
        derived = TernaryForm.from_dict(f, {exponent: 1}).partial(j)
        for k, point in enumerate(spec.points):
            matrix[i, k] = derived.evaluate(point)
    return matrix


def restriction_matrix(field_spec: FieldSpec) -> np.ndarray:
    """
    Coefficients of every monomial restricted to every rational line.

    Shape (10, 4L); columns 4l..4l+3 hold the binary cubic on line l in
    the basis returned by ``PlaneGeometry.line_basis``.
    """
    geometry = plane_geometry(field_spec)
    matrix = np.zeros((len(MONOMIALS), 4 * len(geometry.lines)), dtype=field_spec.code_dtype)
    for i, exponent in enumerate(MONOMIALS):
        mono = TernaryForm.from_dict(field_spec, {exponent: 1})
        for line in range(len(geometry.lines)):
            p, q = geometry.line_basis(line)
            matrix[i, 4 * line : 4 * line + 4] = mono.restrict(p, q)
    return matrix


class EnumerationEngine:
    """
    Exhaustive evaluator for the q^10 messages of a cubic evaluation code.

    Attributes:
        spec: The code being enumerated
        config: Thread, budget and tail-table settings
        columns: Optional subset (or permutation) of evaluation columns
    """

    def __init__(
        self,
        spec: CodeSpec,
        config: Optional[EngineConfig] = None,
        metrics_collector: Optional[MetricsCollector] = None,
        columns: Optional[Sequence[int]] = None,
        job: Optional[str] = None,
    ):
        """
        Initialize the engine.

        Args:
            spec: Code to enumerate
            config: Engine settings (defaults to EngineConfig())
            metrics_collector: Receives codeword and partition counts
            columns: Evaluation columns to keep, in order; puncturing
                drops columns, a permutation reorders them
            job: Job name for metrics (default derived from the code)

        Raises:
            BudgetExceededError: If q^10 exceeds the configured budget
        """
        self.spec = spec
        self.config = config or EngineConfig()
        self.metrics = metrics_collector or NoOpMetricsCollector()
        self.field = spec.field
        q = self.field.q
        self.job = job or f"brute-{spec.variant.value}-q{q}"

        total = q ** len(MONOMIALS)
        if total > self.config.budget:
            raise BudgetExceededError(
                f"exhaustive run over {total} codewords exceeds budget {self.config.budget}"
            )

        self.columns = list(range(spec.length)) if columns is None else list(columns)
        tail_len = max(k for k in range(len(MONOMIALS) + 1) if q**k <= self.config.tail_rows)
        self.head_len = len(MONOMIALS) - tail_len
        logger.debug(
            "Engine initialised",
            job=self.job,
            q=q,
            head=self.head_len,
            tail_rows=q**tail_len,
            columns=len(self.columns),
        )

    # Table helpers

    def _span_table(self, generators: np.ndarray) -> np.ndarray:
        """All F_q-combinations of the generator rows; row 0 is the zero combination."""
        f = self.field
        width = generators.shape[1]
        table = np.zeros((1, width), dtype=f.code_dtype)
        scalars = np.arange(f.q)
        for row in generators:
            scaled = f.mul_arrays(scalars[:, None], row[None, :])
            table = f.add_arrays(scaled[:, None, :], table[None, :, :]).reshape(-1, width)
        return table

    def _head_values(self, generators: np.ndarray, coeffs: Sequence[int]) -> np.ndarray:
        f = self.field
        values = np.zeros(generators.shape[1], dtype=f.code_dtype)
        for c, row in zip(coeffs, generators):
            if c:
                values = f.add_arrays(values, f.mul_arrays(c, row))
        return values

    def _prefixes(self) -> list[tuple[int, ...]]:
        return list(product(range(self.field.q), repeat=min(2, self.head_len)))

    def _heads(self, prefix: tuple[int, ...]) -> list[tuple[int, ...]]:
        rest = self.head_len - len(prefix)
        return [prefix + r for r in product(range(self.field.q), repeat=rest)]

    def _run(self, work: Callable[[tuple[int, ...]], R]) -> list[R]:
        prefixes = self._prefixes()
        with ThreadPoolExecutor(
            max_workers=self.config.threads, thread_name_prefix="rmcubic-engine"
        ) as pool:
            return list(pool.map(work, prefixes))

    def _record(self, rows: int, heads: int) -> None:
        self.metrics.increment_codewords(self.job, rows * heads)
        self.metrics.increment_partitions(self.job)

    # Public operations

    def weight_enumerator(self) -> WeightEnumerator:
        """
        Weight enumerator over all q^10 messages.

        Returns:
            WeightEnumerator of length len(columns); A_0 is the kernel size
        """
        generator = self.spec.generator_matrix()[:, self.columns]
        n = generator.shape[1]
        head_gen = generator[: self.head_len]
        tail = self._span_table(generator[self.head_len :])

        def work(prefix: tuple[int, ...]) -> np.ndarray:
            counts = np.zeros(n + 1, dtype=np.int64)
            heads = self._heads(prefix)
            for head in heads:
                target = self.field.neg_array(self._head_values(head_gen, head))
                zeros = np.count_nonzero(tail == target, axis=1)
                counts += np.bincount(n - zeros, minlength=n + 1)
            self._record(tail.shape[0], len(heads))
            return counts

        partials = self._run(work)
        totals = np.sum(partials, axis=0)
        enumerator = WeightEnumerator.from_mapping(
            n, {w: int(c) for w, c in enumerate(totals) if c}
        )
        logger.info(
            "Exhaustive enumeration finished",
            job=self.job,
            codewords=enumerator.total(),
            support=len(enumerator.counts),
        )
        return enumerator

    def census(self, with_profiles: bool = False) -> CensusResult:
        """
        Classify every cubic form by its point signature.

        Args:
            with_profiles: Also collect flex counts and line profiles of
                smooth and irreducible singular forms

        Raises:
            ConfigurationError: If the code is not the full projective code
            ClassificationError: If a form has a signature of no known kind
        """
        if self.spec.variant is not CodeVariant.PROJECTIVE or self.columns != list(
            range(self.spec.length)
        ):
            raise ConfigurationError("census needs the full projective code")

        f = self.field
        q = f.q
        n = self.spec.length
        geometry = plane_geometry(f, self.spec.convention)
        stacked = np.concatenate(
            [self.spec.generator_matrix()] + [derivative_matrix(self.spec, j) for j in range(3)],
            axis=1,
        )
        restrict = restriction_matrix(f)
        lines = len(geometry.lines)
        lookup = _signature_lookup(q)
        incidence = geometry.incidence.astype(np.float32)
        line_lookup = geometry.line_lookup if with_profiles else None
        projection = (
            projection_matrix(f, self.spec.points) if with_profiles and f.p >= 5 else None
        )

        head_main = stacked[: self.head_len]
        head_restrict = restrict[: self.head_len]
        tail_main = self._span_table(stacked[self.head_len :])
        tail_restrict = self._span_table(restrict[self.head_len :])

        def classify_head(head: tuple[int, ...], partial: _CensusPartial) -> None:
            main_values = self._head_values(head_main, head)
            eq = tail_main == f.neg_array(main_values)
            on_curve = eq[:, :n]
            singular = on_curve & eq[:, n : 2 * n] & eq[:, 2 * n : 3 * n] & eq[:, 3 * n :]
            zeros = np.count_nonzero(on_curve, axis=1)
            sing = np.count_nonzero(singular, axis=1)
            codes = lookup[zeros * (n + 1) + sing]

            if (codes == _UNKNOWN).any():
                row = int(np.argmax(codes == _UNKNOWN))
                raise ClassificationError(
                    f"unexpected signature ({zeros[row]}, {sing[row]}) at q = {q}"
                )

            ambiguous = np.flatnonzero(codes < _UNKNOWN)
            if ambiguous.size:
                target = f.neg_array(self._head_values(head_restrict, head))
                vanishing = tail_restrict[ambiguous] == target
                has_line = vanishing.reshape(ambiguous.size, lines, 4).all(axis=2).any(axis=1)
                first = codes[ambiguous] == _AMBIGUOUS_Q1
                codes[ambiguous] = np.where(
                    first,
                    np.where(
                        has_line,
                        _KIND_CODE[CubicKind.CONCURRENT_RATIONAL_PAIR],
                        _KIND_CODE[CubicKind.CUSP],
                    ),
                    np.where(
                        has_line,
                        _KIND_CODE[CubicKind.NONCONCURRENT_RATIONAL_PAIR],
                        _KIND_CODE[CubicKind.NONSPLIT_NODE],
                    ),
                )

            weights = n - zeros
            partial.kinds += np.bincount(codes, minlength=len(KIND_ORDER))
            partial.weights += np.bincount(
                codes * (n + 1) + weights, minlength=len(KIND_ORDER) * (n + 1)
            )
            smooth = codes == _SMOOTH
            partial.traces += np.bincount(q + 1 - zeros[smooth] + n, minlength=2 * n + 1)

            if line_lookup is not None:
                self._profile_rows(
                    partial,
                    codes,
                    zeros,
                    on_curve,
                    tail_main,
                    main_values,
                    incidence,
                    line_lookup,
                    self._smooth_j(head, codes, on_curve, projection),
                )

        def work(prefix: tuple[int, ...]) -> _CensusPartial:
            partial = _CensusPartial(
                kinds=np.zeros(len(KIND_ORDER), dtype=np.int64),
                weights=np.zeros(len(KIND_ORDER) * (n + 1), dtype=np.int64),
                traces=np.zeros(2 * n + 1, dtype=np.int64),
            )
            heads = self._heads(prefix)
            for head in heads:
                classify_head(head, partial)
            self._record(tail_main.shape[0], len(heads))
            return partial

        partials = self._run(work)
        return self._merge_census(partials, n, with_profiles, projection is not None)

    def _smooth_j(
        self,
        head: tuple[int, ...],
        codes: np.ndarray,
        on_curve: np.ndarray,
        projection: Optional[np.ndarray],
    ) -> np.ndarray:
        """j-invariant code per tail row, -1 where the form is not smooth."""
        js = np.full(codes.shape[0], -1, dtype=np.int64)
        rows = np.flatnonzero(codes == _SMOOTH)
        if projection is None or not rows.size:
            return js
        f = self.field
        q = f.q
        tail_len = len(MONOMIALS) - self.head_len
        # Tail row r carries digit k of r in base q on tail monomial k
        digits = (rows[:, None] // q ** np.arange(tail_len, dtype=np.int64)) % q
        heads = np.broadcast_to(np.array(head, dtype=np.int64), (rows.size, self.head_len))
        coeffs = np.concatenate([heads, digits], axis=1)
        first = np.argmax(on_curve[rows], axis=1)
        for point in np.unique(first):
            selected = first == point
            projected = project(f, coeffs[selected], projection[point][None])
            js[rows[selected]] = j_invariants(f, projected)
        return js

    def _profile_rows(
        self,
        partial: _CensusPartial,
        codes: np.ndarray,
        zeros: np.ndarray,
        on_curve: np.ndarray,
        tail_main: np.ndarray,
        main_values: np.ndarray,
        incidence: np.ndarray,
        line_lookup: np.ndarray,
        js: np.ndarray,
    ) -> None:
        f = self.field
        q = f.q
        n = self.spec.length
        rows = np.flatnonzero(np.isin(codes, _PROFILED))
        if not rows.size:
            return
        points = on_curve[rows]
        counts = np.rint(points.astype(np.float32) @ incidence).astype(np.int64)
        selected = tail_main[rows]
        gradient = [
            f.add_arrays(
                selected[:, (j + 1) * n : (j + 2) * n], main_values[(j + 1) * n : (j + 2) * n]
            ).astype(np.int64)
            for j in range(3)
        ]
        tangent = line_lookup[gradient[0] * q * q + gradient[1] * q + gradient[2]]
        met = np.take_along_axis(counts, np.maximum(tangent, 0), axis=1)
        flexes = np.count_nonzero(points & (tangent >= 0) & (met == 1), axis=1)
        profile = [np.count_nonzero(counts == i, axis=1) for i in range(4)]
        traces = q + 1 - zeros[rows]
        keys = np.stack([codes[rows], traces, flexes] + profile + [js[rows]], axis=1)
        unique, multiplicity = np.unique(keys, axis=0, return_counts=True)
        for key, count in zip(unique.tolist(), multiplicity.tolist()):
            partial.profiles[tuple(key)] = partial.profiles.get(tuple(key), 0) + count

    def _merge_census(
        self, partials: list[_CensusPartial], n: int, with_profiles: bool, with_classes: bool
    ) -> CensusResult:
        q = self.field.q
        kinds = np.sum([p.kinds for p in partials], axis=0)
        weights = np.sum([p.weights for p in partials], axis=0).reshape(len(KIND_ORDER), n + 1)
        traces = np.sum([p.traces for p in partials], axis=0)

        rows: dict[CubicKind, CensusRow] = {}
        for kind in SINGULAR_KINDS:
            code = _KIND_CODE[kind]
            observed = np.flatnonzero(weights[code])
            if observed.size > 1:
                raise ClassificationError(
                    f"{kind.value} forms have several weights {observed.tolist()} at q = {q}"
                )
            weight = int(observed[0]) if observed.size else n - census_signatures(q)[kind][0]
            rows[kind] = CensusRow(kind, int(kinds[code]), weight)
        smooth = {t - n: int(c) for t, c in enumerate(traces) if c}

        profiles: Optional[dict[ProfileKey, dict[ProfileValue, int]]] = None
        classes: Optional[dict[ClassKey, dict[int, int]]] = None
        if with_profiles:
            profiles = {}
            classes = {} if with_classes else None
            merged: dict[tuple[int, ...], int] = {}
            for p in partials:
                for key, count in p.profiles.items():
                    merged[key] = merged.get(key, 0) + count
            for key, count in sorted(merged.items()):
                code, trace, flexes, l0, l1, l2, l3, j = key
                bucket = profiles.setdefault((KIND_ORDER[code], trace), {})
                value = (flexes, (l0, l1, l2, l3))
                bucket[value] = bucket.get(value, 0) + count
                if classes is not None and j >= 0:
                    by_flexes = classes.setdefault((j, trace), {})
                    by_flexes[flexes] = by_flexes.get(flexes, 0) + count

        result = CensusResult(q, rows, smooth, profiles, classes)
        logger.info("Census finished", job=self.job, q=q, forms=result.total())
        return result


def brute_weight_enumerator(
    spec: CodeSpec,
    config: Optional[EngineConfig] = None,
    metrics_collector: Optional[MetricsCollector] = None,
) -> WeightEnumerator:
    """
    Exhaustive weight enumerator of a cubic evaluation code.

    Raises:
        BudgetExceededError: If q^10 exceeds the configured budget
    """
    return EnumerationEngine(spec, config, metrics_collector).weight_enumerator()


def singular_census(
    field_spec: FieldSpec,
    config: Optional[EngineConfig] = None,
    metrics_collector: Optional[MetricsCollector] = None,
    with_profiles: bool = False,
) -> CensusResult:
    """
    Classify all q^10 cubic forms over ``field_spec``.

    Raises:
        BudgetExceededError: If q^10 exceeds the configured budget
    """
    spec = CodeSpec(CodeVariant.PROJECTIVE, field_spec)
    engine = EnumerationEngine(
        spec, config, metrics_collector, job=f"census-q{field_spec.q}"
    )
    return engine.census(with_profiles=with_profiles)


def profile_census(
    field_spec: FieldSpec,
    config: Optional[EngineConfig] = None,
    metrics_collector: Optional[MetricsCollector] = None,
) -> dict[ProfileKey, dict[ProfileValue, int]]:
    """
    Flex counts and line profiles of all smooth and irreducible singular forms.

    Returns:
        (kind, trace) -> {(flexes, (L0, L1, L2, L3)): count}
    """
    result = singular_census(field_spec, config, metrics_collector, with_profiles=True)
    assert result.profiles is not None
    return result.profiles
