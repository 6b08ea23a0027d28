"""
Tests for run configuration and environment loading.
"""

import os
from typing import Optional
from unittest.mock import patch

import pytest

from rmcubic.config import (
    CodeVariant,
    EngineConfig,
    MetricsBackend,
    Method,
    OutputFormat,
    RunConfig,
    Suite,
    _parse_value,
    load_config_from_env,
    split_prime_power,
)
from rmcubic.exceptions import ConfigurationError


class TestSplitPrimePower:
    """Tests for split_prime_power."""

    @pytest.mark.parametrize(
        "q, expected",
        [(2, (2, 1)), (5, (5, 1)), (8, (2, 3)), (9, (3, 2)), (25, (5, 2)), (49, (7, 2))],
    )
    def test_prime_powers(self, q, expected):
        """Test prime powers split into characteristic and degree."""
        assert split_prime_power(q) == expected

    @pytest.mark.parametrize("q", [-3, 0, 1, 6, 12, 100])
    def test_non_prime_powers_raise(self, q):
        """Test that other integers are rejected."""
        with pytest.raises(ConfigurationError):
            split_prime_power(q)


class TestRunConfigValidate:
    """Tests for RunConfig.validate."""

    def test_defaults_are_valid(self):
        """Test the default configuration validates."""
        assert RunConfig().validate() == (5, 1)

    def test_rejects_zero_threads(self):
        """Test a zero thread count is rejected."""
        config = RunConfig(engine=EngineConfig(threads=0))

        with pytest.raises(ConfigurationError) as exc_info:
            config.validate()

        assert "threads" in str(exc_info.value)

    def test_rejects_zero_budget(self):
        """Test a zero budget is rejected."""
        with pytest.raises(ConfigurationError):
            RunConfig(engine=EngineConfig(budget=0)).validate()

    def test_rejects_negative_j(self):
        """Test a negative dual weight is rejected."""
        with pytest.raises(ConfigurationError):
            RunConfig(j=-1).validate()

    def test_rejects_composite_q(self):
        """Test q = 6 is rejected."""
        with pytest.raises(ConfigurationError):
            RunConfig(q=6).validate()


class TestParseValue:
    """Tests for _parse_value."""

    def test_int_and_power(self):
        """Test integers and powers parse."""
        assert _parse_value("42", int) == 42
        assert _parse_value("2**18", int) == 2**18
        assert _parse_value("300_000_000", int) == 300_000_000

    def test_invalid_int(self):
        """Test invalid integers raise ConfigurationError."""
        with pytest.raises(ConfigurationError):
            _parse_value("many", int)

    def test_optional_int(self):
        """Test Optional[int] parses as int, and none as None."""
        assert _parse_value("6", Optional[int]) == 6
        assert _parse_value("none", Optional[int]) is None

    def test_enum_by_value_and_name(self):
        """Test enums parse by value or by member name."""
        assert _parse_value("affine", CodeVariant) is CodeVariant.AFFINE
        assert _parse_value("projective", CodeVariant) is CodeVariant.PROJECTIVE
        assert _parse_value("brute", Method) is Method.BRUTE

    def test_invalid_enum_lists_valid_values(self):
        """Test an unknown enum value names the valid choices."""
        with pytest.raises(ConfigurationError) as exc_info:
            _parse_value("hexagonal", CodeVariant)

        assert "proj" in str(exc_info.value)
        assert "affine" in str(exc_info.value)

    def test_bool(self):
        """Test boolean spellings."""
        assert _parse_value("yes", bool) is True
        assert _parse_value("off", bool) is False
        with pytest.raises(ConfigurationError):
            _parse_value("maybe", bool)


class TestLoadConfigFromEnv:
    """Tests for load_config_from_env."""

    def test_empty_environment_gives_defaults(self):
        """Test defaults when no variables are set."""
        with patch.dict(os.environ, {}, clear=True):
            config = load_config_from_env()

        assert config == RunConfig()

    def test_root_and_nested_values(self):
        """Test root, engine and metrics variables are read."""
        env = {
            "RMCUBIC_Q": "7",
            "RMCUBIC_CODE": "affine",
            "RMCUBIC_METHOD": "brute",
            "RMCUBIC_OUTPUT_FORMAT": "csv",
            "RMCUBIC_SUITE": "dual",
            "RMCUBIC_J": "6",
            "RMCUBIC_ENGINE_THREADS": "8",
            "RMCUBIC_ENGINE_BUDGET": "10**9",
            "RMCUBIC_METRICS_BACKEND": "memory",
        }
        with patch.dict(os.environ, env, clear=True):
            config = load_config_from_env()

        assert config.q == 7
        assert config.code is CodeVariant.AFFINE
        assert config.method is Method.BRUTE
        assert config.output_format is OutputFormat.CSV
        assert config.suite is Suite.DUAL
        assert config.j == 6
        assert config.engine.threads == 8
        assert config.engine.budget == 10**9
        assert config.engine.tail_rows == EngineConfig().tail_rows
        assert config.metrics.backend is MetricsBackend.MEMORY

    def test_custom_prefix(self):
        """Test a different prefix is honoured."""
        with patch.dict(os.environ, {"CUBIC_Q": "11"}, clear=True):
            config = load_config_from_env(prefix="CUBIC")

        assert config.q == 11

    def test_error_names_variable(self):
        """Test parse errors name the offending variable."""
        with patch.dict(os.environ, {"RMCUBIC_ENGINE_THREADS": "lots"}, clear=True):
            with pytest.raises(ConfigurationError) as exc_info:
                load_config_from_env()

        assert "RMCUBIC_ENGINE_THREADS" in str(exc_info.value)
