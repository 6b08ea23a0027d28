"""
Verification suites.

Each suite compares closed forms against independent oracles (exhaustive
enumeration, Weierstrass counts, series expansions) and records one
CheckResult per comparison. Exhaustive oracles beyond the engine budget,
and closed forms outside their characteristic range, are recorded as
skipped with a machine-readable reason instead of failing the run.
"""

from fractions import Fraction
from typing import Callable, Optional

import structlog

from rmcubic.config import CodeVariant, RunConfig, Suite
from rmcubic.cubics import CodeSpec, CubicKind, brute_weight_enumerator, singular_census
from rmcubic.cubics.engine import CensusResult
from rmcubic.ecstats import (
    TraceDistribution,
    class_weights_bruteforce,
    moment_polynomial,
    moments,
    torsion33_distribution_formula,
    trace_distribution_bruteforce,
    trace_distribution_formula,
)
from rmcubic.exceptions import BudgetExceededError, OutOfScopeError, RmCubicError
from rmcubic.ff import FieldSpec, field_for_order
from rmcubic.formulas import (
    gl3_order,
    line_counts_singular,
    line_counts_smooth,
    singular_table,
    w_affine,
    w_projective,
    w_sing_projective,
)
from rmcubic.macwilliams import (
    collinear_dual_count,
    dual_coeff,
    singular_weight_one,
    singular_weight_one_expected,
    torsion_dual_identities,
    transform,
)
from rmcubic.metrics import MetricsCollector, NoOpMetricsCollector
from rmcubic.models import (
    CheckResult,
    CheckStatus,
    VerificationReport,
    WeightEnumerator,
    render_number,
)

logger = structlog.get_logger(__name__)

SUITE_ORDER = (
    Suite.CENSUS,
    Suite.PROJECTIVE,
    Suite.AFFINE,
    Suite.DUAL,
    Suite.MOMENTS,
    Suite.TORSION,
)

# Largest code length for which the dual is transformed back.
INVOLUTION_MAX_LENGTH = 64

_SINGULAR_TRACE = {CubicKind.CUSP: 0, CubicKind.SPLIT_NODE: 1, CubicKind.NONSPLIT_NODE: -1}

ClassWeights = dict[tuple[int, int, int], Fraction]


def flex_shares(n3: int) -> dict[int, Fraction]:
    """
    Share of the cubic forms of one class by rational flex count.

    A form has n3 = #E(F_q)[3] flexes when its hyperplane class is a
    multiple of 3 in the Picard group, and none otherwise.
    """
    if n3 == 1:
        return {1: Fraction(1)}
    return {n3: Fraction(1, n3), 0: 1 - Fraction(1, n3)}


def _enumerator_diff(expected: WeightEnumerator, actual: WeightEnumerator) -> Optional[str]:
    """First disagreement between two enumerators, or None."""
    if expected.length != actual.length:
        return f"length {expected.length} != {actual.length}"
    a, b = expected.as_dict(), actual.as_dict()
    for weight in sorted(set(a) | set(b)):
        if a.get(weight, 0) != b.get(weight, 0):
            return f"A_{weight}: {a.get(weight, 0)} != {b.get(weight, 0)}"
    return None


class Verifier:
    """
    Runs verification suites for one field order.

    Exhaustive oracles are computed at most once per verifier and shared
    across suites.
    """

    def __init__(
        self, config: RunConfig, metrics_collector: Optional[MetricsCollector] = None
    ) -> None:
        self.config = config
        self.q = config.q
        self.p, self.v = config.validate()
        self.metrics = metrics_collector or NoOpMetricsCollector()
        self._census: Optional[CensusResult] = None
        self._brute: dict[CodeVariant, WeightEnumerator] = {}
        self._formula: dict[CodeVariant, WeightEnumerator] = {}
        self._distribution: Optional[TraceDistribution] = None
        self._curves: Optional[TraceDistribution] = None
        self._class_weights: Optional[ClassWeights] = None

    @property
    def field(self) -> FieldSpec:
        return field_for_order(self.q)

    # Recording

    def _job(self, report: VerificationReport) -> str:
        return f"verify-{report.suite}-q{self.q}"

    def _check(
        self,
        report: VerificationReport,
        name: str,
        expected: object,
        actual: object,
        reason: Optional[str] = None,
    ) -> bool:
        ok = expected == actual
        exp = render_number(expected) if isinstance(expected, (int, Fraction)) else str(expected)
        act = render_number(actual) if isinstance(actual, (int, Fraction)) else str(actual)
        status = CheckStatus.PASS if ok else CheckStatus.FAIL
        report.checks.append(CheckResult(name, status, exp, act, reason))
        if ok:
            self.metrics.increment_checks_passed(self._job(report))
        else:
            self.metrics.increment_checks_failed(self._job(report))
            logger.warning("Check failed", check=name, q=self.q, expected=exp, actual=act)
        return ok

    def _compare_enumerators(
        self,
        report: VerificationReport,
        name: str,
        expected: WeightEnumerator,
        actual: WeightEnumerator,
        reason: Optional[str] = None,
    ) -> None:
        diff = _enumerator_diff(expected, actual)
        summary = f"{len(expected.counts)} coefficients, total {expected.total()}"
        self._check(report, name, summary, summary if diff is None else diff, reason)

    def _skip(self, report: VerificationReport, name: str, reason: str) -> None:
        report.checks.append(CheckResult(name, CheckStatus.SKIPPED, reason=reason))
        self.metrics.increment_checks_skipped(self._job(report))
        logger.debug("Check skipped", check=name, q=self.q, reason=reason)

    def _fail(self, report: VerificationReport, name: str, error: Exception) -> None:
        report.checks.append(
            CheckResult(name, CheckStatus.FAIL, actual=type(error).__name__, reason=str(error))
        )
        self.metrics.increment_checks_failed(self._job(report))
        logger.warning("Check raised", check=name, q=self.q, error=str(error))

    def _guard(self, report: VerificationReport, name: str, action: Callable[[], None]) -> None:
        """Run ``action``; out-of-scope and budget errors become skips, others failures."""
        try:
            action()
        except OutOfScopeError as e:
            self._skip(report, name, e.reason)
        except BudgetExceededError:
            self._skip(report, name, "budget-exceeded")
        except RmCubicError as e:
            self._fail(report, name, e)

    # Shared oracles

    def _char_note(self) -> Optional[str]:
        return "char2-paper-unverified" if self.p == 2 else None

    def distribution(self) -> TraceDistribution:
        if self._distribution is None:
            self._distribution = trace_distribution_formula(self.q)
        return self._distribution

    def curve_census(self) -> TraceDistribution:
        if self._curves is None:
            self._curves = trace_distribution_bruteforce(self.q, self.config.engine.threads)
        return self._curves

    def class_weights(self) -> ClassWeights:
        if self._class_weights is None:
            self._class_weights = class_weights_bruteforce(self.q, self.config.engine.threads)
        return self._class_weights

    def census(self) -> CensusResult:
        if self._census is None:
            self._census = singular_census(
                self.field, self.config.engine, self.metrics, with_profiles=self.p >= 5
            )
        return self._census

    def brute(self, variant: CodeVariant) -> WeightEnumerator:
        if variant not in self._brute:
            spec = CodeSpec(variant, self.field)
            self._brute[variant] = brute_weight_enumerator(spec, self.config.engine, self.metrics)
        return self._brute[variant]

    def formula(self, variant: CodeVariant) -> WeightEnumerator:
        if variant not in self._formula:
            if variant is CodeVariant.AFFINE:
                self._formula[variant] = w_affine(self.q, self.distribution())
            else:
                self._formula[variant] = w_projective(self.q, self.distribution())
        return self._formula[variant]

    # Suites

    def run(self, suite: Suite) -> VerificationReport:
        """Run one suite, or every suite in order for Suite.ALL."""
        report = VerificationReport(self.q, suite.value)
        suites = SUITE_ORDER if suite is Suite.ALL else (suite,)
        for s in suites:
            getattr(self, f"_suite_{s.value}")(report)
        logger.info(
            "Verification finished",
            q=self.q,
            suite=suite.value,
            passed=report.passed,
            failed=report.failed,
            skipped=report.skipped,
        )
        return report

    def _suite_census(self, report: VerificationReport) -> None:
        try:
            census = self.census()
        except BudgetExceededError:
            self._skip(report, "census", "budget-exceeded")
            return
        table = singular_table(self.q)
        for kind, row in table.items():
            actual = census.rows[kind]
            self._check(
                report,
                f"census/{kind.value}",
                f"{row.count}@{row.weight}",
                f"{actual.count}@{actual.weight}",
            )
        scale = self.q * gl3_order(self.q)
        expected = {t: scale * m for t, m in self.distribution().masses.items()}
        for t in sorted(set(expected) | set(census.smooth_by_trace)):
            self._check(
                report,
                f"census/smooth(t={t})",
                expected.get(t, Fraction(0)),
                Fraction(census.smooth_by_trace.get(t, 0)),
            )
        if census.profiles is None:
            self._skip(report, "census/profiles", "char-below-5")
            return
        self._check_profiles(report, census)
        self._guard(report, "classes", lambda: self._check_classes(report, census))

    def _expected_flexes(self, kind: CubicKind, t: int, forms: int) -> dict[int, Fraction]:
        """Expected number of forms with each rational flex count."""
        q = self.q
        if kind is CubicKind.SMOOTH:
            if (q + 1 - t) % 3:
                return {1: Fraction(forms)}
            mass = self.distribution().mass(t)
            full = Fraction(forms) * torsion33_distribution_formula(q).get(t, Fraction(0)) / mass
            cyclic = forms - full
            return {9: full / 9, 3: cyclic / 3, 0: full * 8 / 9 + cyclic * 2 / 3}
        branching = CubicKind.SPLIT_NODE if q % 3 == 1 else CubicKind.NONSPLIT_NODE
        if kind is branching:
            return {3: Fraction(forms, 3), 0: Fraction(2 * forms, 3)}
        return {1: Fraction(forms)}

    def _check_profiles(self, report: VerificationReport, census: CensusResult) -> None:
        assert census.profiles is not None
        ordered = sorted(census.profiles.items(), key=lambda kv: (kv[0][0].value, kv[0][1]))
        for (kind, t), bucket in ordered:
            label = f"{kind.value}(t={t})"
            forms = sum(bucket.values())
            observed: dict[int, Fraction] = {}
            lines_ok = True
            for (flexes, counts), count in bucket.items():
                observed[flexes] = observed.get(flexes, Fraction(0)) + count
                try:
                    if kind is CubicKind.SMOOTH:
                        predicted = line_counts_smooth(self.q, t, flexes)
                    else:
                        predicted = line_counts_singular(self.q, _SINGULAR_TRACE[kind], flexes)
                except RmCubicError:
                    predicted = None
                if predicted != counts:
                    lines_ok = False
                    logger.warning(
                        "Line profile mismatch", kind=kind.value, t=t, flexes=flexes, counts=counts
                    )
            expected = {k: v for k, v in self._expected_flexes(kind, t, forms).items() if v}
            self._check(
                report,
                f"profiles/flexes/{label}",
                sorted(expected.items()),
                sorted(observed.items()),
            )
            self._check(report, f"profiles/lines/{label}", True, lines_ok)

    def _check_classes(self, report: VerificationReport, census: CensusResult) -> None:
        """Smooth forms per (j, trace): orbit sizes and flex histograms."""
        if census.smooth_classes is None:
            raise OutOfScopeError("no j-invariants below characteristic 5", reason="char-below-5")
        gl3 = gl3_order(self.q)
        orbits: dict[tuple[int, int], Fraction] = {}
        flexes: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (j, t, n3), weight in self.class_weights().items():
            forms = gl3 * weight
            orbits[(j, t)] = orbits.get((j, t), Fraction(0)) + forms
            bucket = flexes.setdefault((j, t), {})
            for count, share in flex_shares(n3).items():
                bucket[count] = bucket.get(count, Fraction(0)) + forms * share
        for key in sorted(set(orbits) | set(census.smooth_classes)):
            label = f"(j={key[0]},t={key[1]})"
            observed = census.smooth_classes.get(key, {})
            self._check(
                report,
                f"classes/orbits/{label}",
                orbits.get(key, Fraction(0)),
                Fraction(sum(observed.values())),
            )
            self._check(
                report,
                f"classes/flexes/{label}",
                sorted((k, v) for k, v in flexes.get(key, {}).items() if v),
                sorted((k, Fraction(v)) for k, v in observed.items()),
            )

    def _suite_projective(self, report: VerificationReport) -> None:
        variant = CodeVariant.PROJECTIVE
        self._check(report, "projective/total", self.q**10, self.formula(variant).total())
        table = singular_table(self.q)
        by_weight: dict[int, int] = {}
        for row in table.values():
            by_weight[row.weight] = by_weight.get(row.weight, 0) + row.count
        self._compare_enumerators(
            report,
            "projective/singular-table",
            WeightEnumerator.from_mapping(self.q * self.q + self.q + 1, by_weight),
            w_sing_projective(self.q),
        )

        def brute() -> None:
            self._compare_enumerators(
                report,
                "projective/brute",
                self.brute(variant),
                self.formula(variant),
                self._char_note(),
            )

        self._guard(report, "projective/brute", brute)

    def _suite_affine(self, report: VerificationReport) -> None:
        variant = CodeVariant.AFFINE
        if self.p == 3:
            self._skip(report, "affine", "char3-out-of-scope")
            return
        if self.q < 4:
            self._skip(report, "affine", "q-below-4")
            return
        self._check(report, "affine/total", self.q**10, self.formula(variant).total())

        def brute() -> None:
            self._compare_enumerators(
                report,
                "affine/brute",
                self.brute(variant),
                self.formula(variant),
                self._char_note(),
            )

        self._guard(report, "affine/brute", brute)

    def _suite_dual(self, report: VerificationReport) -> None:
        singular = w_sing_projective(self.q)
        self._check(
            report,
            "dual/singular-weight-one",
            singular_weight_one_expected(self.q),
            singular_weight_one(self.q, singular),
        )
        for variant in (CodeVariant.PROJECTIVE, CodeVariant.AFFINE):
            self._dual_for(report, variant)

    def _dual_for(self, report: VerificationReport, variant: CodeVariant) -> None:
        prefix = f"dual/{variant.value}"
        if variant is CodeVariant.AFFINE and (self.p == 3 or self.q < 4):
            self._skip(report, prefix, "char3-out-of-scope" if self.p == 3 else "q-below-4")
            return
        try:
            dual = transform(self.formula(variant), self.q)
        except RmCubicError as e:
            self._fail(report, f"{prefix}/transform", e)
            return
        self._check(report, f"{prefix}/zero-word", 1, dual.coefficient(0))
        if self.q >= 4:
            for j in range(1, 5):
                self._check(report, f"{prefix}/A{j}", 0, dual.coefficient(j))
        for j in range(5, 11):

            def closed_form(j: int = j) -> None:
                expected = dual_coeff(self.q, j, variant)
                self._check(report, f"{prefix}/A{j}", expected, dual.coefficient(j))

            self._guard(report, f"{prefix}/A{j}", closed_form)
        for j in range(5, 8):
            self._check(
                report,
                f"{prefix}/collinear-A{j}",
                collinear_dual_count(self.q, j, variant),
                dual.coefficient(j),
            )

        def oracle() -> None:
            self._compare_enumerators(
                report, f"{prefix}/brute", transform(self.brute(variant), self.q), dual
            )

        self._guard(report, f"{prefix}/brute", oracle)
        if self.q >= 4 and dual.length <= INVOLUTION_MAX_LENGTH:
            self._compare_enumerators(
                report, f"{prefix}/involution", self.formula(variant), transform(dual, self.q)
            )

    def _suite_moments(self, report: VerificationReport) -> None:
        distribution = self.distribution()
        self._check(report, "moments/mass", Fraction(1), distribution.total())
        if self.v == 1 and self.p >= 5:
            for r in range(6):
                self._check(
                    report,
                    f"moments/r{r}",
                    moment_polynomial(self.p, r),
                    self.q * moments(self.q, r, distribution),
                )
        else:
            self._skip(report, "moments/rows", "prime-q-required")

        def brute() -> None:
            oracle = self.curve_census()
            self._check(
                report,
                "moments/distribution-brute",
                sorted(distribution.masses.items()),
                sorted(oracle.masses.items()),
            )

        self._guard(report, "moments/distribution-brute", brute)

    def _suite_torsion(self, report: VerificationReport) -> None:
        def brute() -> None:
            oracle = self.curve_census()
            assert oracle.full_torsion is not None
            self._check(
                report,
                "torsion/full-3-torsion",
                sorted(torsion33_distribution_formula(self.q).items()),
                sorted(oracle.full_torsion.items()),
            )

        self._guard(report, "torsion/full-3-torsion", brute)

        def identities() -> None:
            result = torsion_dual_identities(self.q, self.distribution())
            name = f"torsion/{result.shape.value}"
            self._check(
                report, f"{name}/moment-route", result.coefficient, result.moment_coefficient
            )
            self._check(report, f"{name}/integral-trace", 1, result.solved_trace.denominator)
            self._check(
                report, f"{name}/eta-trace", Fraction(result.eta_trace), result.solved_trace
            )

        self._guard(report, "torsion/identity", identities)


def run_verification(
    config: RunConfig, metrics_collector: Optional[MetricsCollector] = None
) -> VerificationReport:
    """
    Run ``config.suite`` at ``config.q``.

    Raises:
        ConfigurationError: If the configuration is invalid
    """
    return Verifier(config, metrics_collector).run(config.suite)
