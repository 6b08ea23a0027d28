"""
Configuration models for the rmcubic library.

This module defines the configuration dataclasses and enums that control
enumeration runs: which code and method to use, the exhaustive-engine
budget and thread pool, the metrics backend, and the report format.
"""

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, TypeVar, get_type_hints

from sympy import factorint

from rmcubic.exceptions import ConfigurationError


class CodeVariant(Enum):
    """
    Which evaluation code a run targets.

    Attributes:
        PROJECTIVE: Cubic forms evaluated on all rational points of P^2
        AFFINE: Cubic polynomials evaluated on the q^2 points of A^2
    """

    PROJECTIVE = "proj"
    AFFINE = "affine"


class Method(Enum):
    """
    How a weight enumerator is produced.

    Attributes:
        FORMULA: Closed-form assembly from class numbers and counts
        BRUTE: Exhaustive enumeration of every codeword
    """

    FORMULA = "formula"
    BRUTE = "brute"


class OutputFormat(Enum):
    """
    Report rendering.

    Attributes:
        JSON: One JSON document with decimal-string numbers
        CSV: Comma-separated rows with a header line
    """

    JSON = "json"
    CSV = "csv"


class Suite(Enum):
    """
    Verification suites run by ``rmcubic verify``.

    Attributes:
        CENSUS: Singular census, smooth counts and inflection statistics
        PROJECTIVE: Projective enumerator, formula against exhaustive
        AFFINE: Affine enumerator, formula against exhaustive
        DUAL: Low-weight dual coefficients by three independent routes
        MOMENTS: Trace distribution and even moments
        TORSION: Full 3-torsion masses and the torsion dual identities
        ALL: Every suite above
    """

    CENSUS = "census"
    PROJECTIVE = "projective"
    AFFINE = "affine"
    DUAL = "dual"
    MOMENTS = "moments"
    TORSION = "torsion"
    ALL = "all"


class MetricsBackend(Enum):
    """
    Metrics collector selection.

    Attributes:
        NOOP: Discard all metrics
        MEMORY: Keep counts in process, readable through get_metrics
        PROMETHEUS: Export counters with prometheus-client
        STATSD: Push counters to a StatsD daemon
    """

    NOOP = "noop"
    MEMORY = "memory"
    PROMETHEUS = "prometheus"
    STATSD = "statsd"


@dataclass
class EngineConfig:
    """
    Configuration for the exhaustive enumeration engine.

    Attributes:
        threads: Worker threads used to process message partitions
        budget: Largest number of codewords (q^10) an exhaustive run may visit
        tail_rows: Maximum rows in the precomputed tail table
    """

    threads: int = 4
    budget: int = 300_000_000
    tail_rows: int = 2**18


@dataclass
class MetricsConfig:
    """
    Configuration for metrics collection.

    Attributes:
        backend: Which collector to build
        namespace: Prefix for exported metric names
        statsd_host: StatsD daemon host
        statsd_port: StatsD daemon port
    """

    backend: MetricsBackend = MetricsBackend.NOOP
    namespace: str = "rmcubic"
    statsd_host: str = "localhost"
    statsd_port: int = 8125


@dataclass
class RunConfig:
    """
    Root configuration for one rmcubic run.

    Attributes:
        q: Field order, a prime power
        code: Projective or affine evaluation code
        method: Closed-form assembly or exhaustive enumeration
        output_format: Report rendering
        suite: Verification suite (used by ``verify``)
        j: Dual weight (used by ``dual``)
        engine: Exhaustive-engine settings
        metrics: Metrics backend settings
    """

    q: int = 5
    code: CodeVariant = CodeVariant.PROJECTIVE
    method: Method = Method.FORMULA
    output_format: OutputFormat = OutputFormat.JSON
    suite: Suite = Suite.ALL
    j: Optional[int] = None
    engine: EngineConfig = field(default_factory=EngineConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)

    def validate(self) -> tuple[int, int]:
        """
        Check the settings and return the characteristic and degree of q.

        Returns:
            Tuple (p, v) with q = p^v

        Raises:
            ConfigurationError: If q is not a prime power, or a numeric
                setting is out of range
        """
        p, v = split_prime_power(self.q)
        if self.engine.threads < 1:
            raise ConfigurationError(f"threads must be positive, got {self.engine.threads}")
        if self.engine.budget < 1:
            raise ConfigurationError(f"budget must be positive, got {self.engine.budget}")
        if self.engine.tail_rows < 1:
            raise ConfigurationError(f"tail_rows must be positive, got {self.engine.tail_rows}")
        if self.j is not None and self.j < 0:
            raise ConfigurationError(f"j must be non-negative, got {self.j}")
        return p, v


def split_prime_power(q: int) -> tuple[int, int]:
    """
    Write q as p^v.

    Raises:
        ConfigurationError: If q is not a prime power
    """
    if q < 2:
        raise ConfigurationError(f"q must be a prime power, got {q}")
    factors = factorint(q)
    if len(factors) != 1:
        raise ConfigurationError(f"q must be a prime power, got {q}")
    ((p, v),) = factors.items()
    return int(p), int(v)


T = TypeVar("T")


def _parse_value(value: str, target_type: Any) -> Any:
    """
    Parse a string value to the target type.

    Args:
        value: String value from environment variable
        target_type: Target type to convert to

    Returns:
        Parsed value of the target type

    Raises:
        ConfigurationError: If value cannot be parsed to target type
    """
    # Handle None/Optional
    if value.lower() in ("none", "null", ""):
        return None

    # Optional[X] arrives as a Union; parse as X
    args = getattr(target_type, "__args__", None)
    if args and type(None) in args:
        target_type = next(arg for arg in args if arg is not type(None))

    if target_type is bool:
        if value.lower() in ("true", "1", "yes", "on"):
            return True
        elif value.lower() in ("false", "0", "no", "off"):
            return False
        else:
            raise ConfigurationError(f"Invalid boolean value: {value}") from None

    if target_type is int:
        try:
            # Accept underscores and powers such as 2**18
            if "**" in value:
                base, exponent = value.split("**", 1)
                return int(base) ** int(exponent)
            return int(value)
        except ValueError as e:
            raise ConfigurationError(f"Invalid integer value: {value}") from e

    if isinstance(target_type, type) and issubclass(target_type, Enum):
        try:
            # Try by value first
            return target_type(value)
        except ValueError:
            # Try by name
            try:
                return target_type[value.upper()]
            except KeyError as e:
                valid_values = [member.value for member in target_type]
                raise ConfigurationError(
                    f"Invalid {target_type.__name__} value: {value}. "
                    f"Valid values: {', '.join(valid_values)}"
                ) from e

    return value


def _load_nested_config(prefix: str, config_class: type[T], env_vars: dict[str, str]) -> T:
    """
    Load a nested configuration object from environment variables.

    Args:
        prefix: Environment variable prefix (e.g., "RMCUBIC_ENGINE")
        config_class: Configuration dataclass to instantiate
        env_vars: Dictionary of environment variables

    Returns:
        Instance of config_class with values from environment variables
    """
    type_hints = get_type_hints(config_class)
    kwargs: dict[str, Any] = {}

    for field_name, field_type in type_hints.items():
        env_key = f"{prefix}_{field_name.upper()}"

        if env_key in env_vars:
            try:
                kwargs[field_name] = _parse_value(env_vars[env_key], field_type)
            except ConfigurationError as e:
                raise ConfigurationError(f"Error parsing {env_key}: {e}") from e

    return config_class(**kwargs)


def load_config_from_env(prefix: str = "RMCUBIC") -> RunConfig:
    """
    Load RunConfig from environment variables.

    Environment variables are prefixed with the given prefix (default
    "RMCUBIC"). Nested configuration appends the section name, e.g.:
    - RMCUBIC_Q for q
    - RMCUBIC_CODE for code ("proj" or "affine")
    - RMCUBIC_ENGINE_THREADS for engine.threads
    - RMCUBIC_ENGINE_BUDGET for engine.budget
    - RMCUBIC_METRICS_BACKEND for metrics.backend

    Args:
        prefix: Environment variable prefix (default: "RMCUBIC")

    Returns:
        RunConfig instance populated from environment variables

    Raises:
        ConfigurationError: If environment variables contain invalid values

    Example:
        >>> os.environ["RMCUBIC_Q"] = "7"
        >>> os.environ["RMCUBIC_ENGINE_THREADS"] = "8"
        >>> config = load_config_from_env()
        >>> config.q
        7
        >>> config.engine.threads
        8
    """
    env_vars = dict(os.environ)

    root_kwargs: dict[str, Any] = {}
    root_type_hints = get_type_hints(RunConfig)

    for field_name, field_type in root_type_hints.items():
        env_key = f"{prefix}_{field_name.upper()}"

        # Skip nested config objects
        if field_type in (EngineConfig, MetricsConfig):
            continue

        if env_key in env_vars:
            try:
                root_kwargs[field_name] = _parse_value(env_vars[env_key], field_type)
            except ConfigurationError as e:
                raise ConfigurationError(f"Error parsing {env_key}: {e}") from e

    engine_prefix = f"{prefix}_ENGINE"
    metrics_prefix = f"{prefix}_METRICS"

    if any(k.startswith(engine_prefix) for k in env_vars):
        root_kwargs["engine"] = _load_nested_config(engine_prefix, EngineConfig, env_vars)

    if any(k.startswith(metrics_prefix) for k in env_vars):
        root_kwargs["metrics"] = _load_nested_config(metrics_prefix, MetricsConfig, env_vars)

    return RunConfig(**root_kwargs)
