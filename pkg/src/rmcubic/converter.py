"""
Report converters.

This module provides the ReportConverter abstract base class and the JSON
and CSV implementations used by the command line. Documents carry every
number as a decimal string, so rendered reports are exact and identical
across runs.
"""

import csv
import io
import json
from abc import ABC, abstractmethod
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence

import structlog

from rmcubic.config import OutputFormat
from rmcubic.exceptions import SerializationError

logger = structlog.get_logger(__name__)

Rows = Sequence[Sequence[str]]


class ReportConverter(ABC):
    """
    Abstract base class for report converters.

    A report is given both as a nested document (for JSON) and, where the
    report is tabular, as rows whose first row is the header (for CSV).
    """

    @abstractmethod
    def serialize(self, document: Mapping[str, Any], rows: Optional[Rows] = None) -> str:
        """
        Render a report.

        Args:
            document: Nested mapping of strings, lists and mappings
            rows: Tabular form of the same report, header first

        Returns:
            The rendered text, newline-terminated

        Raises:
            SerializationError: If the report cannot be rendered
        """
        pass


class JsonReportConverter(ReportConverter):
    """Indented JSON with keys in document order."""

    def serialize(self, document: Mapping[str, Any], rows: Optional[Rows] = None) -> str:
        try:
            return json.dumps(document, indent=2, default=self._json_encoder) + "\n"
        except (TypeError, ValueError) as e:
            logger.error(
                "Failed to serialize report",
                keys=sorted(document),
                error=str(e),
                exc_info=True,
            )
            raise SerializationError(f"Failed to serialize report: {e}") from e

    def _json_encoder(self, obj: Any) -> Any:
        """
        Encode the exact types that may still appear in a document.

        Raises:
            TypeError: For floats hidden in containers and anything unknown
        """
        if isinstance(obj, Fraction):
            if obj.denominator == 1:
                return str(obj.numerator)
            return f"{obj.numerator}/{obj.denominator}"
        if isinstance(obj, Enum):
            return obj.value
        if is_dataclass(obj) and not isinstance(obj, type):
            return asdict(obj)
        raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


class CsvReportConverter(ReportConverter):
    """
    Comma-separated rows with ``\\n`` line endings.

    Reports without a tabular form are flattened to ``key,value`` rows of
    their scalar fields.
    """

    def serialize(self, document: Mapping[str, Any], rows: Optional[Rows] = None) -> str:
        table = rows if rows is not None else self._flatten(document)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        try:
            for row in table:
                if any(not isinstance(cell, str) for cell in row):
                    raise TypeError(f"CSV cells must be strings, got {list(row)!r}")
                writer.writerow(row)
        except (TypeError, csv.Error) as e:
            logger.error("Failed to write CSV report", error=str(e), exc_info=True)
            raise SerializationError(f"Failed to write CSV report: {e}") from e
        return buffer.getvalue()

    def _flatten(self, document: Mapping[str, Any]) -> list[list[str]]:
        rows = [["key", "value"]]
        for key, value in document.items():
            if isinstance(value, str):
                rows.append([key, value])
            elif isinstance(value, Mapping):
                rows.extend([f"{key}.{k}", v] for k, v in value.items() if isinstance(v, str))
        return rows


def create_converter(output_format: OutputFormat) -> ReportConverter:
    """Converter for an output format."""
    if output_format is OutputFormat.CSV:
        return CsvReportConverter()
    return JsonReportConverter()
