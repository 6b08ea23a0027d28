"""
Work counters for enumeration and verification jobs.

Every counter is keyed by a job name such as ``brute-proj-q5``,
``census-q5`` or ``verify-census-q5``. Backends implement a single
``increment`` for all counters; the named ``increment_*`` helpers are the
calling convention used by the engine and the verifier.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from threading import Lock
from typing import Any, Callable, Optional

import structlog

from rmcubic.config import MetricsBackend, MetricsConfig

logger = structlog.get_logger(__name__)


class Counter(Enum):
    """
    Counted quantities. Values double as MetricCounts field names.

    Attributes:
        CODEWORDS: Codewords evaluated by the engine
        PARTITIONS: Message partitions completed on a worker
        CHECKS_PASSED: Verification checks that matched their oracle
        CHECKS_FAILED: Verification checks that disagreed or raised
        CHECKS_SKIPPED: Verification checks skipped with a reason
    """

    CODEWORDS = "codewords"
    PARTITIONS = "partitions"
    CHECKS_PASSED = "checks_passed"
    CHECKS_FAILED = "checks_failed"
    CHECKS_SKIPPED = "checks_skipped"


_DESCRIPTIONS = {
    Counter.CODEWORDS: "Codewords evaluated",
    Counter.PARTITIONS: "Message partitions completed",
    Counter.CHECKS_PASSED: "Verification checks that passed",
    Counter.CHECKS_FAILED: "Verification checks that failed",
    Counter.CHECKS_SKIPPED: "Verification checks that were skipped",
}


class ProgressEvent(Enum):
    """
    Job progress events for monitoring callbacks, one per counter.

    Attributes:
        CODEWORDS_ENUMERATED: A batch of codewords was evaluated
        PARTITION_COMPLETED: A message partition finished on a worker
        CHECK_PASSED: A verification check matched its oracle
        CHECK_FAILED: A verification check disagreed with its oracle
        CHECK_SKIPPED: A verification check was skipped
    """

    CODEWORDS_ENUMERATED = "codewords_enumerated"
    PARTITION_COMPLETED = "partition_completed"
    CHECK_PASSED = "check_passed"
    CHECK_FAILED = "check_failed"
    CHECK_SKIPPED = "check_skipped"


_EVENT_FOR = {
    Counter.CODEWORDS: ProgressEvent.CODEWORDS_ENUMERATED,
    Counter.PARTITIONS: ProgressEvent.PARTITION_COMPLETED,
    Counter.CHECKS_PASSED: ProgressEvent.CHECK_PASSED,
    Counter.CHECKS_FAILED: ProgressEvent.CHECK_FAILED,
    Counter.CHECKS_SKIPPED: ProgressEvent.CHECK_SKIPPED,
}

# Callback signature: (event: ProgressEvent, job: str, context: dict[str, Any]) -> None
ProgressCallback = Callable[[ProgressEvent, str, dict[str, Any]], None]


@dataclass
class MetricCounts:
    """
    Counter values of one job.

    Attributes:
        codewords: Number of codewords evaluated
        partitions: Number of message partitions completed
        checks_passed: Number of verification checks that passed
        checks_failed: Number of verification checks that failed
        checks_skipped: Number of verification checks that were skipped
    """

    codewords: int = 0
    partitions: int = 0
    checks_passed: int = 0
    checks_failed: int = 0
    checks_skipped: int = 0


class MetricsCollector(ABC):
    """Receives counter increments from engine workers and verifiers."""

    @abstractmethod
    def increment(self, counter: Counter, job: str, count: int = 1) -> None:
        """
        Add ``count`` to one counter of a job.

        Args:
            counter: Which quantity to count
            job: The job name
            count: Amount to add (default: 1)
        """

    @abstractmethod
    def get_metrics(self, job: Optional[str] = None) -> dict[str, MetricCounts]:
        """
        Current counts, for one job or for all jobs when ``job`` is None.

        Backends that only export (Prometheus, StatsD) return an empty dict.
        """

    def increment_codewords(self, job: str, count: int = 1) -> None:
        self.increment(Counter.CODEWORDS, job, count)

    def increment_partitions(self, job: str, count: int = 1) -> None:
        self.increment(Counter.PARTITIONS, job, count)

    def increment_checks_passed(self, job: str, count: int = 1) -> None:
        self.increment(Counter.CHECKS_PASSED, job, count)

    def increment_checks_failed(self, job: str, count: int = 1) -> None:
        self.increment(Counter.CHECKS_FAILED, job, count)

    def increment_checks_skipped(self, job: str, count: int = 1) -> None:
        self.increment(Counter.CHECKS_SKIPPED, job, count)


class InMemoryMetricsCollector(MetricsCollector):
    """
    Thread-safe in-memory counts, for tests and for the CLI's progress log.
    """

    def __init__(self) -> None:
        self._metrics: dict[str, MetricCounts] = {}
        self._lock = Lock()

    def increment(self, counter: Counter, job: str, count: int = 1) -> None:
        with self._lock:
            counts = self._metrics.setdefault(job, MetricCounts())
            setattr(counts, counter.value, getattr(counts, counter.value) + count)

    def get_metrics(self, job: Optional[str] = None) -> dict[str, MetricCounts]:
        with self._lock:
            if job is None:
                return dict(self._metrics)
            return {job: self._metrics.get(job, MetricCounts())}

    def reset(self, job: Optional[str] = None) -> None:
        """Zero one job's counts, or drop every job when ``job`` is None."""
        with self._lock:
            if job is None:
                self._metrics.clear()
            elif job in self._metrics:
                self._metrics[job] = MetricCounts()


class NoOpMetricsCollector(MetricsCollector):
    """Discards everything. The default collector."""

    def increment(self, counter: Counter, job: str, count: int = 1) -> None:
        pass

    def get_metrics(self, job: Optional[str] = None) -> dict[str, MetricCounts]:
        return {}


class PrometheusMetricsCollector(MetricsCollector):
    """
    One Prometheus counter per Counter member, labelled by job.

    The counter for ``Counter.CODEWORDS`` in namespace ``rmcubic`` is
    exported as ``rmcubic_codewords_total``.

    Requires the prometheus_client library to be installed:
        pip install prometheus-client
    """

    def __init__(self, namespace: str = "rmcubic", registry: Any = None) -> None:
        """
        Args:
            namespace: Prometheus namespace for metrics (default: "rmcubic")
            registry: Optional Prometheus registry (uses default if None)

        Raises:
            ImportError: If prometheus_client is not installed
        """
        try:
            from prometheus_client import REGISTRY
            from prometheus_client import Counter as PromCounter
        except ImportError as e:
            raise ImportError(
                "prometheus_client is required for PrometheusMetricsCollector. "
                "Install it with: pip install prometheus-client"
            ) from e

        registry = registry or REGISTRY
        self._counters = {
            counter: PromCounter(
                f"{namespace}_{counter.value}_total",
                _DESCRIPTIONS[counter],
                ["job"],
                registry=registry,
            )
            for counter in Counter
        }

    def increment(self, counter: Counter, job: str, count: int = 1) -> None:
        self._counters[counter].labels(job=job).inc(count)

    def get_metrics(self, job: Optional[str] = None) -> dict[str, MetricCounts]:
        logger.warning(
            "get_metrics() on PrometheusMetricsCollector is not recommended. "
            "Query metrics directly from Prometheus instead."
        )
        return {}


class StatsDMetricsCollector(MetricsCollector):
    """
    Sends every increment as a StatsD counter named ``<counter>.<job>``.

    Requires the statsd library to be installed:
        pip install statsd

    Example:
        >>> collector = StatsDMetricsCollector(host='localhost', port=8125)
        >>> collector.increment_codewords("brute-proj-q5", 625)  # codewords.brute_proj_q5
    """

    def __init__(
        self,
        host: str = "localhost",
        port: int = 8125,
        prefix: str = "rmcubic",
        maxudpsize: int = 512,
    ):
        """
        Raises:
            ImportError: If statsd library is not installed
        """
        try:
            from statsd import StatsClient
        except ImportError as e:
            raise ImportError(
                "statsd is required for StatsDMetricsCollector. "
                "Install it with: pip install statsd"
            ) from e

        self._client = StatsClient(host=host, port=port, prefix=prefix, maxudpsize=maxudpsize)

    @staticmethod
    def _sanitize_job(job: str) -> str:
        """Replace characters StatsD treats as separators."""
        return job.replace(".", "_").replace("-", "_")

    def increment(self, counter: Counter, job: str, count: int = 1) -> None:
        self._client.incr(f"{counter.value}.{self._sanitize_job(job)}", count)

    def get_metrics(self, job: Optional[str] = None) -> dict[str, MetricCounts]:
        logger.warning(
            "get_metrics() is not supported for StatsDMetricsCollector. "
            "Query your StatsD backend directly for metric values."
        )
        return {}


class CallbackMetricsCollector(MetricsCollector):
    """
    Forwards increments to another collector, then fires the matching
    ProgressEvent callbacks. The CLI uses it to log partition progress.

    A raising callback is logged and never interrupts the job.
    """

    def __init__(self, base_collector: MetricsCollector):
        self._base_collector = base_collector
        self._callbacks: dict[ProgressEvent, list[ProgressCallback]] = {
            event: [] for event in ProgressEvent
        }
        self._lock = Lock()

    def register_callback(self, event: ProgressEvent, callback: ProgressCallback) -> None:
        with self._lock:
            self._callbacks[event].append(callback)

    def unregister_callback(self, event: ProgressEvent, callback: ProgressCallback) -> None:
        with self._lock:
            if callback in self._callbacks[event]:
                self._callbacks[event].remove(callback)

    def increment(self, counter: Counter, job: str, count: int = 1) -> None:
        self._base_collector.increment(counter, job, count)
        event = _EVENT_FOR[counter]
        with self._lock:
            callbacks = list(self._callbacks[event])
        for callback in callbacks:
            try:
                callback(event, job, {"count": count})
            except Exception as e:
                logger.exception(
                    "Error invoking callback for event",
                    progress_event=event.value,
                    job=job,
                    callback=getattr(callback, "__name__", repr(callback)),
                    error=str(e),
                )

    def get_metrics(self, job: Optional[str] = None) -> dict[str, MetricCounts]:
        return self._base_collector.get_metrics(job)


def create_metrics_collector(config: Optional[MetricsConfig] = None) -> MetricsCollector:
    """
    Build the collector named by a MetricsConfig (no-op when None).

    Raises:
        ImportError: If the selected backend's optional dependency is missing
    """
    config = config or MetricsConfig()
    if config.backend is MetricsBackend.MEMORY:
        return InMemoryMetricsCollector()
    if config.backend is MetricsBackend.PROMETHEUS:
        return PrometheusMetricsCollector(namespace=config.namespace)
    if config.backend is MetricsBackend.STATSD:
        return StatsDMetricsCollector(
            host=config.statsd_host, port=config.statsd_port, prefix=config.namespace
        )
    return NoOpMetricsCollector()
