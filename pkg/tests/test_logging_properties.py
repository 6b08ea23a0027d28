"""
Property-based tests for structured logging.

Every record must be one parseable JSON object on stderr carrying the
standard fields, whatever the event text or context values.
"""

import json
import logging
from datetime import datetime
from io import StringIO
from unittest.mock import patch

import structlog
from hypothesis import given, settings
from hypothesis import strategies as st

from rmcubic.config import CodeVariant, EngineConfig
from rmcubic.cubics.engine import brute_weight_enumerator
from rmcubic.cubics.models import CodeSpec
from rmcubic.ff import make_field
from rmcubic.logging_config import configure_structlog
from rmcubic.metrics import CallbackMetricsCollector, NoOpMetricsCollector, ProgressEvent

job_names = st.text(
    min_size=1,
    max_size=60,
    alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd"), whitelist_characters="-_"),
)


def _capture(action, level=logging.DEBUG):
    """Run ``action`` with a fresh stderr handler and return the parsed records."""
    with patch("sys.stderr", new_callable=StringIO) as stderr:
        configure_structlog(level)
        action()
        lines = stderr.getvalue().strip().splitlines()
    return [json.loads(line) for line in lines]


class TestStructlogConfiguration:
    """Property-based tests for the JSON log format."""

    def teardown_method(self):
        """Restore the default configuration."""
        configure_structlog()

    @given(
        event=st.text(min_size=1, max_size=100),
        job=job_names,
        q=st.integers(min_value=2, max_value=2**13),
    )
    @settings(max_examples=50, deadline=None)
    def test_log_output_is_valid_json(self, event, job, q):
        """Test any event text and context renders as one JSON object."""
        logger = structlog.get_logger("rmcubic.test")

        records = _capture(lambda: logger.info(event, job=job, q=q))

        assert len(records) == 1
        assert records[0]["event"] == event
        assert records[0]["job"] == job
        assert records[0]["q"] == q

    @given(
        event=st.text(min_size=1, max_size=100),
        level=st.sampled_from(["debug", "info", "warning", "error"]),
    )
    @settings(max_examples=50, deadline=None)
    def test_records_contain_standard_fields(self, event, level):
        """Test timestamp, level and logger name are always present."""
        logger = structlog.get_logger("rmcubic.test")

        records = _capture(lambda: getattr(logger, level)(event))

        assert len(records) == 1
        record = records[0]
        datetime.fromisoformat(record["timestamp"].replace("Z", "+00:00"))
        assert record["level"] == level
        assert record["logger"] == "rmcubic.test"


class TestLibraryLogging:
    """Property-based tests for context carried by library events."""

    def teardown_method(self):
        """Restore the default configuration."""
        configure_structlog()

    @given(job=job_names, count=st.integers(min_value=1, max_value=10**9))
    @settings(max_examples=50, deadline=None)
    def test_callback_errors_carry_job(self, job, count):
        """Test a failing progress callback is logged with its job, whatever the name."""
        collector = CallbackMetricsCollector(NoOpMetricsCollector())

        def failing(event, job, context):
            raise RuntimeError("callback failed")

        collector.register_callback(ProgressEvent.CODEWORDS_ENUMERATED, failing)

        records = _capture(lambda: collector.increment_codewords(job, count))

        errors = [r for r in records if r["event"] == "Error invoking callback for event"]
        assert len(errors) == 1
        assert errors[0]["job"] == job
        assert errors[0]["level"] == "error"

    @given(
        q=st.sampled_from([2, 3]),
        variant=st.sampled_from(list(CodeVariant)),
        threads=st.integers(min_value=1, max_value=4),
    )
    @settings(max_examples=8, deadline=None)
    def test_enumeration_logs_its_job(self, q, variant, threads):
        """Test exhaustive runs report their job and codeword count on completion."""
        spec = CodeSpec(variant, make_field(q))

        records = _capture(
            lambda: brute_weight_enumerator(spec, EngineConfig(threads=threads)),
            logging.INFO,
        )

        finished = [r for r in records if r["event"] == "Exhaustive enumeration finished"]
        assert len(finished) == 1
        assert finished[0]["job"] == f"brute-{variant.value}-q{q}"
        assert finished[0]["codewords"] == q**10
