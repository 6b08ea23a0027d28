"""
Command-line interface.

Subcommands write one report to stdout (JSON by default, CSV with
``--format csv``); logs go to stderr. Exit status is 0 on success, 1 when
a verification check fails and 2 for configuration, budget and scope
errors.
"""

import argparse
import sys
from dataclasses import replace
from typing import Any, Callable, Optional, Sequence

import structlog

from rmcubic.arithfun import class_number, hurwitz, tau
from rmcubic.config import (
    CodeVariant,
    Method,
    OutputFormat,
    RunConfig,
    Suite,
    load_config_from_env,
)
from rmcubic.converter import Rows, create_converter
from rmcubic.cubics import CodeSpec, brute_weight_enumerator, singular_census
from rmcubic.ecstats import trace_distribution_bruteforce, trace_distribution_formula
from rmcubic.exceptions import (
    BudgetExceededError,
    ConfigurationError,
    FieldError,
    InvalidArgumentError,
    OutOfScopeError,
    RmCubicError,
)
from rmcubic.ff import field_for_order
from rmcubic.formulas import formula_census, w_affine, w_projective
from rmcubic.logging_config import set_log_level
from rmcubic.macwilliams import dual_coeff, transform
from rmcubic.metrics import (
    CallbackMetricsCollector,
    MetricsCollector,
    ProgressEvent,
    create_metrics_collector,
)
from rmcubic.models import WeightEnumerator
from rmcubic.verify import run_verification

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2

_USAGE_ERRORS = (
    ConfigurationError,
    BudgetExceededError,
    FieldError,
    OutOfScopeError,
    InvalidArgumentError,
)

Handler = Callable[[argparse.Namespace, RunConfig, MetricsCollector], int]


def _log_partition(event: ProgressEvent, job: str, context: dict[str, Any]) -> None:
    logger.debug("Partition completed", job=job, count=context.get("count"))


def build_metrics(config: RunConfig) -> MetricsCollector:
    """The configured collector, wrapped to log partition progress."""
    collector = CallbackMetricsCollector(create_metrics_collector(config.metrics))
    collector.register_callback(ProgressEvent.PARTITION_COMPLETED, _log_partition)
    return collector


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Environment settings overridden by explicit flags.

    Raises:
        ConfigurationError: If a value is invalid
    """
    config = load_config_from_env()
    overrides: dict[str, Any] = {}
    for name in ("q", "j"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "code", None):
        overrides["code"] = CodeVariant(args.code)
    if getattr(args, "method", None):
        overrides["method"] = Method(args.method)
    if getattr(args, "suite", None):
        overrides["suite"] = Suite(args.suite)
    if getattr(args, "format", None):
        overrides["output_format"] = OutputFormat(args.format)
    engine = config.engine
    if getattr(args, "threads", None) is not None:
        engine = replace(engine, threads=args.threads)
    if getattr(args, "budget", None) is not None:
        engine = replace(engine, budget=args.budget)
    config = replace(config, engine=engine, **overrides)
    config.validate()
    return config


def _emit(config: RunConfig, document: dict[str, Any], rows: Optional[Rows] = None) -> None:
    sys.stdout.write(create_converter(config.output_format).serialize(document, rows))


def _enumerator(config: RunConfig, metrics: MetricsCollector) -> WeightEnumerator:
    if config.method is Method.BRUTE:
        spec = CodeSpec(config.code, field_for_order(config.q))
        return brute_weight_enumerator(spec, config.engine, metrics)
    if config.code is CodeVariant.AFFINE:
        return w_affine(config.q)
    return w_projective(config.q)


def cmd_enumerate(args: argparse.Namespace, config: RunConfig, metrics: MetricsCollector) -> int:
    enumerator = _enumerator(config, metrics)
    document = enumerator.to_document(config.q, config.code.value, config.method.value)
    _emit(config, document, enumerator.to_rows())
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: RunConfig, metrics: MetricsCollector) -> int:
    report = run_verification(config, metrics)
    _emit(config, report.to_document(), report.to_rows())
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_census(args: argparse.Namespace, config: RunConfig, metrics: MetricsCollector) -> int:
    if config.method is Method.BRUTE:
        census = singular_census(field_for_order(config.q), config.engine, metrics)
    else:
        census = formula_census(config.q)
    _emit(config, census.to_document(), census.to_rows())
    return EXIT_OK


def cmd_classnum(args: argparse.Namespace, config: RunConfig, metrics: MetricsCollector) -> int:
    document = {
        "delta": str(args.delta),
        "class_number": str(class_number(args.delta)),
        "hurwitz": _fraction(hurwitz(args.delta)),
    }
    _emit(config, document)
    return EXIT_OK


def cmd_tau(args: argparse.Namespace, config: RunConfig, metrics: MetricsCollector) -> int:
    _emit(config, {"n": str(args.n), "tau": str(tau(args.n))})
    return EXIT_OK


def cmd_ecstats(args: argparse.Namespace, config: RunConfig, metrics: MetricsCollector) -> int:
    if config.method is Method.BRUTE:
        distribution = trace_distribution_bruteforce(config.q, config.engine.threads)
    else:
        distribution = trace_distribution_formula(config.q)
    document = distribution.to_document()
    rows = [["trace", "mass"]] + [
        [str(t), _fraction(m)] for t, m in sorted(distribution.masses.items())
    ]
    _emit(config, document, rows)
    return EXIT_OK


def cmd_dual(args: argparse.Namespace, config: RunConfig, metrics: MetricsCollector) -> int:
    if config.j is None:
        raise ConfigurationError("dual needs --j")
    dual = transform(_enumerator(config, metrics), config.q)
    document = {
        "q": str(config.q),
        "code": config.code.value,
        "method": config.method.value,
        "j": str(config.j),
        "transform": str(dual.coefficient(config.j)),
    }
    try:
        document["closed_form"] = str(dual_coeff(config.q, config.j, config.code))
    except OutOfScopeError as e:
        document["closed_form_skipped"] = e.reason
    except InvalidArgumentError:
        pass
    _emit(config, document)
    return EXIT_OK


def _fraction(value: Any) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _add_common(parser: argparse.ArgumentParser, *, q: bool = True) -> None:
    if q:
        parser.add_argument("--q", type=int, help="field order (prime power)")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], help="report format")
    parser.add_argument("--threads", type=int, help="worker threads for exhaustive runs")
    parser.add_argument("--budget", type=int, help="largest exhaustive run, in codewords")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmcubic",
        description="Weight enumerators of cubic Reed-Muller codes over the projective plane.",
    )
    parser.add_argument("--log-level", default=None, help="root log level, e.g. DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    codes = [c.value for c in CodeVariant]
    methods = [m.value for m in Method]

    p = sub.add_parser("enumerate", help="weight enumerator of a code")
    _add_common(p)
    p.add_argument("--code", choices=codes)
    p.add_argument("--method", choices=methods)
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("verify", help="run verification suites")
    _add_common(p)
    p.add_argument("--suite", choices=[s.value for s in Suite])
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("census", help="counts and weights of cubics by kind")
    _add_common(p)
    p.add_argument("--method", choices=methods)
    p.set_defaults(handler=cmd_census)

    p = sub.add_parser("classnum", help="class number and Hurwitz class number")
    _add_common(p, q=False)
    p.add_argument("--delta", type=int, required=True, help="negative discriminant")
    p.set_defaults(handler=cmd_classnum)

    p = sub.add_parser("tau", help="Ramanujan tau function")
    _add_common(p, q=False)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=cmd_tau)

    p = sub.add_parser("ecstats", help="trace distribution of elliptic curves")
    _add_common(p)
    p.add_argument("--method", choices=methods)
    p.set_defaults(handler=cmd_ecstats)

    p = sub.add_parser("dual", help="one coefficient of the dual enumerator")
    _add_common(p)
    p.add_argument("--code", choices=codes)
    p.add_argument("--method", choices=methods)
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(handler=cmd_dual)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point for the ``rmcubic`` console script.

    Returns:
        Process exit status
    """
    args = build_parser().parse_args(argv)
    try:
        if args.log_level:
            set_log_level(args.log_level)
        config = resolve_config(args)
    except (ConfigurationError, ValueError) as e:
        logger.error("Invalid configuration", error=str(e))
        return EXIT_ERROR

    handler: Handler = args.handler
    try:
        return handler(args, config, build_metrics(config))
    except _USAGE_ERRORS as e:
        logger.error(
            "Command failed", command=args.command, error=str(e), error_type=type(e).__name__
        )
        return EXIT_ERROR
    except RmCubicError as e:
        logger.error("Computation failed", command=args.command, error=str(e), exc_info=True)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
