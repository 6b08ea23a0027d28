"""
Tests for the closed-form weight enumerators.
"""

from fractions import Fraction

import pytest

from rmcubic.cubics.classify import inflection_count, line_profile
from rmcubic.cubics.models import CubicKind, HomogeneousCubic
from rmcubic.ecstats import trace_distribution_bruteforce
from rmcubic.exceptions import FieldError, InvalidArgumentError, OutOfScopeError
from rmcubic.ff import make_field
from rmcubic.formulas import (
    affine_line_polynomial,
    formula_census,
    gl3_order,
    line_counts_singular,
    line_counts_smooth,
    singular_table,
    smooth_line_weights,
    w_affine,
    w_noline_affine,
    w_projective,
    w_sing_irred_affine,
    w_sing_projective,
    w_smooth_projective,
)


class TestSingularTable:
    """Tests for the singular census table."""

    def test_q2_rows(self):
        """Test every row over F_2."""
        counts = {kind: row.count for kind, row in singular_table(2).items()}

        assert counts == {
            CubicKind.ZERO: 1,
            CubicKind.TRIPLE_LINE: 7,
            CubicKind.LINE_DOUBLE_LINE: 42,
            CubicKind.CONCURRENT_RATIONAL: 7,
            CubicKind.CONCURRENT_RATIONAL_PAIR: 21,
            CubicKind.CONCURRENT_CONJUGATE_TRIPLE: 14,
            CubicKind.NONCONCURRENT_RATIONAL: 28,
            CubicKind.NONCONCURRENT_RATIONAL_PAIR: 28,
            CubicKind.NONCONCURRENT_CONJUGATE_TRIPLE: 8,
            CubicKind.CONIC_TANGENT_LINE: 84,
            CubicKind.CONIC_SECANT_RATIONAL: 84,
            CubicKind.CONIC_SECANT_CONJUGATE: 28,
            CubicKind.CUSP: 168,
            CubicKind.SPLIT_NODE: 84,
            CubicKind.NONSPLIT_NODE: 84,
        }

    def test_q5_rows(self):
        """Test counts and weights over F_5."""
        table = singular_table(5)

        assert table[CubicKind.CONCURRENT_RATIONAL].count == 2480
        assert table[CubicKind.CONCURRENT_RATIONAL].weight == 15
        assert table[CubicKind.NONCONCURRENT_RATIONAL].count == 15500
        assert table[CubicKind.CONIC_SECANT_RATIONAL].count == 186000
        assert table[CubicKind.CUSP].count == 372000
        assert table[CubicKind.SPLIT_NODE].weight == 26
        assert sum(row.count for row in table.values()) == 2325625

    def test_rejects_non_prime_power(self):
        """Test q = 6 is not a field order."""
        with pytest.raises(FieldError):
            singular_table(6)


class TestProjectiveEnumerator:
    """Tests for the projective weight enumerator."""

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13])
    def test_total_is_q_to_the_tenth(self, q):
        """Test every message is counted once."""
        assert w_projective(q).total() == q**10

    def test_q5_low_weights(self):
        """Test the minimum distance and first coefficients at q = 5."""
        enum = w_projective(5)

        assert enum.coefficient(0) == 1
        assert all(enum.coefficient(i) == 0 for i in range(1, 15))
        assert enum.coefficient(15) == 2480
        assert enum.coefficient(16) == 15500
        assert enum.length == 31

    def test_smooth_part_q5(self):
        """Test smooth forms sit at weights q^2 + t."""
        smooth = w_smooth_projective(5)

        assert smooth.coefficient(25) == 1488000
        assert smooth.coefficient(30) == 0
        assert smooth.total() == 5 * gl3_order(5)

    def test_singular_part_matches_table(self):
        """Test the singular enumerator regroups the table by weight."""
        table = singular_table(7)
        expected = {}
        for row in table.values():
            expected[row.weight] = expected.get(row.weight, 0) + row.count

        assert w_sing_projective(7).as_dict() == expected

    def test_brute_distribution_gives_same_enumerator(self):
        """Test the enumerator only depends on the trace masses."""
        assert w_projective(7, trace_distribution_bruteforce(7)) == w_projective(7)


class TestAffineEnumerator:
    """Tests for the affine weight enumerator."""

    @pytest.mark.parametrize("q", [4, 5, 7, 8, 11, 13, 16, 25])
    def test_total_is_q_to_the_tenth(self, q):
        """Test every message is counted once."""
        assert w_affine(q).total() == q**10

    def test_pieces_q5(self):
        """Test individual pieces at q = 5."""
        assert w_sing_irred_affine(5).total() == 1860000
        assert w_noline_affine(5).coefficient(20) == 2400
        assert w_affine(5).length == 25
        assert w_affine(5).coefficient(0) == 1

    def test_line_polynomial(self):
        """Test the per-line polynomial sums to q^6 - 1."""
        poly = affine_line_polynomial(5)

        assert poly[20] == 452
        assert sum(poly.values()) == 5**6 - 1
        for q in (4, 7, 8, 11):
            assert sum(affine_line_polynomial(q).values()) == q**6 - 1

    @pytest.mark.parametrize("t", range(-4, 5))
    def test_smooth_line_weights_cover_every_line(self, t):
        """Test the averaged weights of a smooth cubic sum to the line count."""
        assert sum(smooth_line_weights(5, t).values()) == Fraction(31)

    def test_characteristic_three_out_of_scope(self):
        """Test characteristic 3 is refused with a reason tag."""
        with pytest.raises(OutOfScopeError) as exc_info:
            w_affine(9)

        assert exc_info.value.reason == "char3-out-of-scope"

    def test_q2_rejected(self):
        """Test q = 2 is below the affine closed forms."""
        with pytest.raises(InvalidArgumentError):
            w_affine(2)


class TestLineCounts:
    """Tests for line incidence counts."""

    def test_smooth_counts(self):
        """Test a smooth cubic with trace 1 and one flex over F_5."""
        assert line_counts_smooth(5, 1, 1) == (9, 16, 4, 2)

    def test_cusp_counts(self):
        """Test the cusp over F_5."""
        assert line_counts_singular(5, 0, 1) == (8, 12, 9, 2)

    def test_counts_agree_with_the_classifier(self):
        """Test the closed form against a direct count on the Fermat cubic."""
        fermat = HomogeneousCubic.from_terms(
            make_field(5), {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1}
        )

        flexes = inflection_count(fermat)

        assert line_counts_smooth(5, 0, flexes) == line_profile(fermat) == (6, 18, 3, 4)

    def test_impossible_flex_count_raises(self):
        """Test a flex count giving a fractional line count is rejected."""
        with pytest.raises(InvalidArgumentError):
            line_counts_smooth(5, 0, 2)


class TestFormulaCensus:
    """Tests for the closed-form census."""

    def test_q5(self):
        """Test the smooth split and the total at q = 5."""
        census = formula_census(5)

        assert census.smooth_by_trace[0] == 1488000
        assert sum(census.smooth_by_trace.values()) == 7440000
        assert census.total() == 5**10
