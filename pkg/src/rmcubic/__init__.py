"""
rmcubic - exact weight enumerators of cubic Reed-Muller codes.

The projective code evaluates ternary cubic forms over F_q at the
q^2 + q + 1 points of the projective plane; the affine code evaluates
cubic polynomials at the q^2 affine points. This package provides:

- Closed-form weight enumerators of both codes, assembled from a census
  of singular cubics and the trace distribution of elliptic curves
- An exhaustive, vectorised enumeration engine used as an oracle
- Exact MacWilliams transforms and closed forms for low dual weights
- Class numbers, Ramanujan's tau and eta-product expansions
- Verification suites and a command-line interface
"""

try:
    from importlib.metadata import version

    __version__ = version("rmcubic")
except Exception:
    __version__ = "0.1.0"

from rmcubic.arithfun import class_number, eta_product_coefficients, hurwitz, tau
from rmcubic.config import (
    CodeVariant,
    EngineConfig,
    Method,
    MetricsBackend,
    MetricsConfig,
    OutputFormat,
    RunConfig,
    Suite,
    load_config_from_env,
)
from rmcubic.converter import CsvReportConverter, JsonReportConverter, ReportConverter
from rmcubic.ecstats import (
    TorsionShape,
    TraceDistribution,
    moments,
    torsion_restricted_moments,
    trace_distribution_bruteforce,
    trace_distribution_formula,
)
from rmcubic.exceptions import (
    BudgetExceededError,
    ClassificationError,
    ConfigurationError,
    FieldError,
    InvalidArgumentError,
    NonIntegralCoefficientError,
    OutOfScopeError,
    RmCubicError,
    SerializationError,
)
from rmcubic.ff import FieldElement, FieldSpec, graded_lex_elements, make_field
from rmcubic.formulas import w_affine, w_projective
from rmcubic.logging_config import configure_structlog
from rmcubic.macwilliams import (
    dual_coeff_affine,
    dual_coeff_projective,
    torsion_dual_identities,
    transform,
)
from rmcubic.metrics import (
    CallbackMetricsCollector,
    Counter,
    InMemoryMetricsCollector,
    MetricCounts,
    MetricsCollector,
    NoOpMetricsCollector,
    ProgressCallback,
    ProgressEvent,
    PrometheusMetricsCollector,
    StatsDMetricsCollector,
)
from rmcubic.models import CheckResult, CheckStatus, VerificationReport, WeightEnumerator
from rmcubic.verify import run_verification

configure_structlog()

__all__ = [
    "__version__",
    "w_projective",
    "w_affine",
    "transform",
    "dual_coeff_projective",
    "dual_coeff_affine",
    "torsion_dual_identities",
    "trace_distribution_formula",
    "trace_distribution_bruteforce",
    "moments",
    "torsion_restricted_moments",
    "TorsionShape",
    "TraceDistribution",
    "class_number",
    "hurwitz",
    "tau",
    "eta_product_coefficients",
    "FieldSpec",
    "FieldElement",
    "make_field",
    "graded_lex_elements",
    "WeightEnumerator",
    "VerificationReport",
    "CheckResult",
    "CheckStatus",
    "run_verification",
    "RunConfig",
    "EngineConfig",
    "MetricsConfig",
    "CodeVariant",
    "Method",
    "MetricsBackend",
    "OutputFormat",
    "Suite",
    "load_config_from_env",
    "ReportConverter",
    "JsonReportConverter",
    "CsvReportConverter",
    "RmCubicError",
    "ConfigurationError",
    "BudgetExceededError",
    "FieldError",
    "InvalidArgumentError",
    "OutOfScopeError",
    "NonIntegralCoefficientError",
    "ClassificationError",
    "SerializationError",
    "MetricsCollector",
    "InMemoryMetricsCollector",
    "NoOpMetricsCollector",
    "CallbackMetricsCollector",
    "PrometheusMetricsCollector",
    "StatsDMetricsCollector",
    "MetricCounts",
    "Counter",
    "ProgressEvent",
    "ProgressCallback",
    "configure_structlog",
]
