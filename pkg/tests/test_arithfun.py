"""
Tests for class numbers, tau and eta products.
"""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import primerange

from rmcubic.arithfun import (
    class_number,
    class_number_table,
    eta_product_coefficients,
    euler_series,
    hurwitz,
    hurwitz_by_forms,
    kronecker,
    reduced_forms,
    series_power,
    series_product,
    tau,
    tau_table,
    weighted_class_number,
)
from rmcubic.exceptions import InvalidArgumentError, InvalidDiscriminantError

negative_discriminants = st.integers(min_value=3, max_value=2000).map(lambda n: -n)


class TestKronecker:
    """Tests for the Kronecker symbol."""

    @pytest.mark.parametrize(
        "a, n, expected",
        [(2, 7, 1), (3, 7, -1), (-1, 3, -1), (-1, 5, 1), (5, 8, -1), (7, 8, 1), (4, 6, 0), (9, 1, 1)],
    )
    def test_values(self, a, n, expected):
        """Test known symbol values."""
        assert kronecker(a, n) == expected

    def test_n_must_be_positive(self):
        """Test n < 1 is rejected."""
        with pytest.raises(InvalidArgumentError):
            kronecker(3, 0)


class TestClassNumbers:
    """Tests for class numbers of binary quadratic forms."""

    def test_reduced_forms_of_minus_20(self):
        """Test the two reduced forms of discriminant -20."""
        assert reduced_forms(-20) == [(1, 0, 5), (2, 2, 3)]

    def test_non_primitive_forms_included_on_request(self):
        """Test 2x^2 + 2y^2 appears only without the primitivity filter."""
        assert (2, 0, 2) not in reduced_forms(-16)
        assert (2, 0, 2) in reduced_forms(-16, primitive=False)

    @pytest.mark.parametrize(
        "d, h",
        [(-3, 1), (-4, 1), (-7, 1), (-8, 1), (-15, 2), (-20, 2), (-23, 3), (-47, 5), (-71, 7)],
    )
    def test_class_numbers(self, d, h):
        """Test class numbers of small discriminants."""
        assert class_number(d) == h

    @pytest.mark.parametrize("d", [0, 5, -5, -6])
    def test_invalid_discriminants(self, d):
        """Test non-negative or 2, 3 mod 4 discriminants are rejected."""
        with pytest.raises(InvalidDiscriminantError):
            class_number(d)

    def test_invalid_discriminant_is_an_argument_error(self):
        """Test the discriminant error is catchable as InvalidArgumentError and ValueError."""
        with pytest.raises(ValueError):
            class_number(1)

    def test_weighted_class_numbers(self):
        """Test the unit weights at -3 and -4."""
        assert weighted_class_number(-3) == Fraction(1, 3)
        assert weighted_class_number(-4) == Fraction(1, 2)
        assert weighted_class_number(-23) == 3


class TestHurwitz:
    """Tests for Hurwitz class numbers."""

    @pytest.mark.parametrize(
        "delta, expected",
        [
            (-3, Fraction(1, 3)),
            (-4, Fraction(1, 2)),
            (-7, Fraction(1)),
            (-8, Fraction(1)),
            (-12, Fraction(4, 3)),
            (-16, Fraction(3, 2)),
            (-20, Fraction(2)),
            (-5, Fraction(0)),
            (-6, Fraction(0)),
        ],
    )
    def test_values(self, delta, expected):
        """Test known Hurwitz class numbers."""
        assert hurwitz(delta) == expected

    def test_non_negative_raises(self):
        """Test delta >= 0 is rejected."""
        with pytest.raises(InvalidDiscriminantError):
            hurwitz(0)

    @given(negative_discriminants)
    @settings(max_examples=150, deadline=None)
    def test_two_independent_computations_agree(self, delta):
        """Test square-divisor summation and weighted form counting agree."""
        assert hurwitz(delta) == hurwitz_by_forms(delta)

    @pytest.mark.parametrize("p", list(primerange(2, 60)))
    def test_kronecker_hurwitz_relation(self, p):
        """Test the sum of H(t^2 - 4p) over |t| < 2 sqrt(p) equals 2p."""
        total = sum(
            (hurwitz(t * t - 4 * p) for t in range(-2 * p, 2 * p + 1) if t * t < 4 * p),
            Fraction(0),
        )

        assert total == 2 * p

    def test_table(self):
        """Test the tabulated values and the table bound."""
        table = class_number_table(30)

        assert table.class_numbers[-23] == 3
        assert table.hurwitz(-20) == 2
        assert table.hurwitz(-5) == 0
        with pytest.raises(InvalidArgumentError):
            table.hurwitz(-31)


class TestSeries:
    """Tests for power series helpers."""

    def test_euler_series(self):
        """Test the pentagonal number expansion."""
        assert euler_series(8) == [1, -1, -1, 0, 0, 1, 0, 1]

    def test_euler_series_with_step(self):
        """Test prod (1 - x^{2m})."""
        assert euler_series(8, 2) == [1, 0, -1, 0, -1, 0, 0, 0]

    def test_series_power_matches_repeated_products(self):
        """Test the recurrence against direct multiplication."""
        base = euler_series(20)
        direct = [1] + [0] * 19
        for _ in range(5):
            direct = series_product(direct, base)

        assert series_power(base, 5) == direct

    def test_negative_power_inverts(self):
        """Test f^-1 * f = 1."""
        base = euler_series(15)

        assert series_product(series_power(base, -1), base) == [1] + [0] * 14

    def test_series_power_needs_unit_constant(self):
        """Test a base with constant term other than 1 is rejected."""
        with pytest.raises(InvalidArgumentError):
            series_power([2, 1], 3)

    def test_eta_products(self):
        """Test eta-product expansions."""
        assert eta_product_coefficients({1: 8}, 5) == [1, -8, 20, 0, -70]
        assert eta_product_coefficients({1: 6, 3: 6}, 5)[4] == 6
        assert eta_product_coefficients({}, 3) == [1, 0, 0]


class TestTau:
    """Tests for Ramanujan's tau function."""

    def test_first_values(self):
        """Test tau(1..7)."""
        assert [tau(n) for n in range(1, 8)] == [1, -24, 252, -1472, 4830, -6048, -16744]

    def test_table_agrees_with_tau(self):
        """Test the table and single lookups agree."""
        table = tau_table(100)

        assert table[1] == 1
        assert table[100] == tau(100)
        with pytest.raises(InvalidArgumentError):
            table[101]

    @pytest.mark.parametrize("n, bound", [(0, 10), (11, 10), (5, 0), (5, 10001)])
    def test_out_of_range(self, n, bound):
        """Test n and bound limits."""
        with pytest.raises(InvalidArgumentError):
            tau(n, bound)

    @given(st.integers(min_value=1, max_value=60), st.integers(min_value=1, max_value=60))
    @settings(max_examples=100, deadline=None)
    def test_multiplicative(self, m, n):
        """Test tau(mn) = tau(m) tau(n) for coprime m, n."""
        assume(gcd(m, n) == 1)

        assert tau(m * n) == tau(m) * tau(n)

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
    def test_hecke_relation_at_prime_squares(self, p):
        """Test tau(p^2) = tau(p)^2 - p^11."""
        assert tau(p * p) == tau(p) ** 2 - p**11
